#include "belle/geometry_bounds.hpp"
#include "belle/pair_model.hpp"

#include <doctest.h>

#include <set>

using namespace belle;

namespace {

Rational r(long p, long q = 1) { return make_rational(p, q); }

GeometrySpec affine(unsigned q) { return {GeometryKind::affine, q, 1}; }
GeometrySpec projective(unsigned q) { return {GeometryKind::projective, q, 1}; }

std::size_t count_points(unsigned q, unsigned dim) {
  std::size_t n = 1;
  for (unsigned i = 0; i < dim; ++i) n *= q;
  return n;
}

// One-dimensional subspaces of F_q^dim, counted by distinct normalized vectors.
std::size_t count_lines(unsigned q, unsigned dim) {
  std::set<Point> reps;
  for (Point x = 1; x < count_points(q, dim); ++x) {
    FqVector v = FqVector::from_code(q, x);
    auto field = FiniteField::get(q);
    unsigned lead = 0;
    for (auto c : v.coords)
      if (c != 0) {
        lead = c;
        break;
      }
    reps.insert(scale(field->inv(lead), v).code());
  }
  return reps.size();
}

}  // namespace

TEST_CASE("closed set sizes") {
  CHECK(closed_set_size(affine(2), 3) == count_points(2, 3));
  CHECK(closed_set_size(projective(2), 1) == count_lines(2, 2));
  CHECK(closed_set_size(projective(3), 2) == count_lines(3, 3));
  CHECK(closed_set_size(affine(5), 0) == 1);
  CHECK(closed_set_size(projective(5), 0) == 1);
  CHECK(closed_set_size({GeometryKind::disintegrated, 0, 1}, 4) == 4);
  CHECK_THROWS_AS(closed_set_size(affine(2), -1), std::invalid_argument);
  CHECK_THROWS_AS(closed_set_size(affine(6), 1), std::invalid_argument);
}

TEST_CASE("k for delta") {
  CHECK(min_k_for_delta(affine(2), r(1, 4)) == 2u);
  CHECK(min_k_for_delta(affine(3), r(1, 2)) == 1u);
  CHECK(min_k_for_delta(affine(2), r(1, 8)) == 3u);
  CHECK(min_k_for_delta(projective(2), r(1, 4)) == 2u);
  for (unsigned q : {2u, 3u, 4u, 5u}) CHECK(min_k_for_delta(affine(q), r(q - 1, q) ) == 1u);
  CHECK_FALSE(min_k_for_delta({GeometryKind::disintegrated, 0, 1}, r(1, 2)).has_value());
  CHECK_THROWS_AS(min_k_for_delta(affine(2), r(1)), std::invalid_argument);
  CHECK_THROWS_AS(min_k_for_delta(affine(2), r(0)), std::invalid_argument);
  // Antitone in delta.
  unsigned previous = 0;
  for (long den = 2; den < 200; ++den) {
    unsigned k = *min_k_for_delta(affine(3), r(1, den));
    CHECK(k >= previous);
    previous = k;
  }
}

TEST_CASE("epsilon lower bounds") {
  CHECK(epsilon_lower_bound(1, false) == r(1, 2));
  CHECK(epsilon_lower_bound(1, true) == 1);
  CHECK(epsilon_lower_bound(3, false) == r(1, 6));
  for (long n = 1; n <= 10; ++n) CHECK(epsilon_lower_bound(n, false) < epsilon_lower_bound(n, true));
  CHECK_THROWS_AS(epsilon_lower_bound(0, false), std::invalid_argument);
}

TEST_CASE("subspace enumeration and the ratio law") {
  // Gaussian binomial totals: number of subspaces of F_2^d and F_3^d.
  CHECK(enumerate_subspaces(2, 3).size() == 16);
  CHECK(enumerate_subspaces(3, 3).size() == 28);
  CHECK(enumerate_subspaces(2, 4).size() == 67);
  for (unsigned q : {2u, 3u}) {
    const unsigned dim = q == 2 ? 5 : 3;
    auto subs = enumerate_subspaces(q, dim);
    for (const auto& A : subs)
      for (const auto& B : subs) {
        if (!B.subset_of(A)) continue;
        const long k = static_cast<long>(A.dimension) - static_cast<long>(B.dimension);
        Rational ratio = make_rational(static_cast<long>(B.size()), static_cast<long>(A.size()));
        CHECK(ratio == closure_ratio(affine(q), A.dimension, k));
      }
  }
}

TEST_CASE("averaging witness") {
  const unsigned q = 2;
  std::vector<Point> all(8);
  for (Point x = 0; x < 8; ++x) all[x] = x;
  ClosedSetChain chain{affine(q), {{0, 1}, {0, 1, 2, 3}, all}};
  auto full = RationalSet::full();

  // R(alpha) = whole space: every b has measure mu(C).
  auto w = averaging_witness(chain, {{full, all}}, full);
  CHECK(w.measure == 1);
  CHECK(w.average == 1);

  // R(alpha) = {5}: anything else has measure 0.
  w = averaging_witness(chain, {{full, {5}}}, full);
  CHECK(w.measure == 0);
  CHECK(w.index == 0);

  // Four equal-weight cells, each hitting a different plane of F_2^3.
  std::vector<std::vector<Point>> planes{{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 2, 4, 6}, {1, 3, 5, 7}};
  std::vector<TraceCell> traces;
  for (int i = 0; i < 4; ++i) traces.push_back({RationalSet::vertical_strip({r(i, 4), r(i + 1, 4)}), planes[i]});
  ClosedSetChain top{affine(q), {all}};
  w = averaging_witness(top, traces, full);
  // Tally by hand over the 8 points.
  std::vector<Rational> tally(8, Rational(0));
  for (const auto& p : planes)
    for (Point b : p) tally[b] += r(1, 4);
  auto min_it = std::min_element(tally.begin(), tally.end());
  CHECK(w.measure == *min_it);
  CHECK(w.b == static_cast<Point>(min_it - tally.begin()));
  Rational avg{0};
  for (const auto& t : tally) avg += t;
  CHECK(w.average == avg / 8);
  CHECK(w.measure <= w.average);

  CHECK_THROWS_AS(averaging_witness(ClosedSetChain{affine(q), {}}, traces, full), std::invalid_argument);
  CHECK_THROWS_AS(averaging_witness(ClosedSetChain{affine(q), {{0, 1, 2}}}, traces, full), std::invalid_argument);
}

TEST_CASE("general linear group orders") {
  CHECK(general_linear_group(2, 2).size() == 6);
  CHECK(general_linear_group(3, 2).size() == 48);
  CHECK(general_linear_group(2, 3).size() == 168);
}

TEST_CASE("exhaustive pair search") {
  auto e0 = FqVector::basis(2, 0), e1 = FqVector::basis(2, 1);
  CHECK(exhaustive_pair_search(2, 2, 1, {e0, e1}).gap == 0);
  CHECK(exhaustive_pair_search(2, 2, 2, {e0, e1}).gap == 0);
  CHECK(exhaustive_pair_search(2, 2, 1, {e0}).gap == 1);
  auto res = exhaustive_pair_search(2, 2, 2, {e0});
  CHECK(res.gap > 0);
  CHECK(res.candidates == 1296);
  CHECK(exhaustive_pair_search(2, 2, 2, {e0}, 3).gap == res.gap);
  CHECK_THROWS_AS(exhaustive_pair_search(2, 2, 3, {e0}), SearchTooLarge);
  CHECK_THROWS_AS(exhaustive_pair_search(2, 3, 2, {e0}), SearchTooLarge);
}

TEST_CASE("pure-set search is monotone in the grid") {
  for (unsigned w = 1; w < 3; ++w) {
    auto g1 = exhaustive_pure_search(3, w, 1);
    auto g2 = exhaustive_pure_search(3, w, 2);
    CHECK(g2.gap <= g1.gap);
    CHECK(exhaustive_pure_search(3, 3, 2).gap == 0);
  }
}

TEST_CASE("pair search agrees with distances computed on the square") {
  // Rebuild the best 2x2 candidate as a random endomorphism and measure the
  // Hausdorff distance through dist_to_image on every constant per column.
  auto e0 = FqVector::basis(2, 0);
  const auto group = general_linear_group(2, 2);
  auto res = exhaustive_pair_search(2, 2, 2, {e0});
  std::vector<StepMap<WindowInjection>::Cell> cells;
  for (unsigned c = 0; c < 2; ++c)
    for (unsigned row = 0; row < 2; ++row) {
      const auto& table = group[res.best[c * 2 + row]];
      std::vector<FqVector> images{FqVector::from_code(2, table[1]), FqVector::from_code(2, table[2])};
      cells.push_back({RationalSet::rectangle(r(c, 2), r(c + 1, 2), r(row, 2), r(row + 1, 2)),
                       linear_endo_from_basis_images(2, images)});
    }
  RandomEndo g(StepMap<WindowInjection>::from_cells(cells));
  // W-valued strips are the image of the constant embedding onto span{e0}
  // within the window: the identity restricted to W-valued f.
  Rational forward{0}, backward{0};
  for (Point a = 0; a < 4; ++a)
    for (Point b = 0; b < 4; ++b) {
      auto f = vertical_strip_map<Point>({r(1, 2)}, {a, b});
      auto gf = apply(g, f);
      // Distance from gf to W-valued vertical strips, column by column.
      Rational d{0};
      for (unsigned c = 0; c < 2; ++c) {
        Rational best{1};
        for (Point w : {Point{0}, Point{1}}) {
          Rational miss{0};
          for (unsigned row = 0; row < 2; ++row)
            if (gf.value_at(r(2 * c + 1, 4), r(2 * row + 1, 4)) != w) miss += r(1, 4);
          best = std::min(best, miss);
        }
        d += best;
      }
      forward = std::max(forward, d);
      if (a < 2 && b < 2) {
        auto y = vertical_strip_map<Point>({r(1, 2)}, {a, b});
        backward = std::max(backward, dist_to_image(y, g));
      }
    }
  CHECK(std::max(forward, backward) == res.gap);
}
