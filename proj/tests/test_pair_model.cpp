#include "belle/pair_model.hpp"

#include <doctest.h>

#include <random>

using namespace belle;

namespace {

Rational r(long p, long q = 1) { return make_rational(p, q); }

// Random step map on a k x k grid, values drawn from `pool`.
template <class V>
StepMap<V> grid_map(unsigned k, const std::vector<V>& pool, std::mt19937& rng, bool vertical_only = false) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<typename StepMap<V>::Cell> cells;
  for (unsigned c = 0; c < k; ++c) {
    const V column_value = pool[pick(rng)];
    for (unsigned row = 0; row < k; ++row)
      cells.push_back({RationalSet::rectangle(r(c, k), r(c + 1, k), r(row, k), r(row + 1, k)),
                       vertical_only ? column_value : pool[pick(rng)]});
  }
  return StepMap<V>::from_cells(std::move(cells));
}

std::vector<WindowInjection> small_endos() {
  return {identity_endo(Domain::natural()), successor_endo(), shift_endo(2), table_endo({{0, 3}, {3, 0}}),
          table_endo({{0, 5}, {5, 7}, {7, 0}})};
}

// Midpoint of cell (i, j) of an L x L grid.
std::pair<Rational, Rational> mid(unsigned L, unsigned i, unsigned j) { return {r(2 * i + 1, 2 * L), r(2 * j + 1, 2 * L)}; }

// Brute-force d(f, h(M^Omega)) on an L x L grid refining both maps: per column,
// the best a among [0, span) or a point outside every preimage (cost 1).
Rational grid_dist_to_image(const RandomVariable& f, const RandomEndo& h, unsigned L, Point span) {
  Rational total{0};
  for (unsigned i = 0; i < L; ++i) {
    unsigned best = L;
    for (Point a = 0; a < span; ++a) {
      unsigned miss = 0;
      for (unsigned j = 0; j < L; ++j) {
        auto [x, y] = mid(L, i, j);
        if (h.map().value_at(x, y).apply(a) != f.value_at(x, y)) ++miss;
      }
      best = std::min(best, miss);
    }
    total += r(best, static_cast<long>(L) * L);
  }
  return total;
}

}  // namespace

TEST_CASE("random endomorphisms act pointwise") {
  std::mt19937 rng(3);
  const auto endos = small_endos();
  std::vector<Point> points{0, 1, 2, 3, 5, 7};
  for (int trial = 0; trial < 40; ++trial) {
    RandomEndo g(grid_map(3, endos, rng)), h(grid_map(2, endos, rng));
    auto f = grid_map(4, points, rng);
    auto hf = apply(h, f);
    auto ghf = apply(g, hf);
    CHECK(apply(compose(g, h), f) == ghf);
    for (unsigned i = 0; i < 12; ++i)
      for (unsigned j = 0; j < 12; ++j) {
        auto [x, y] = mid(12, i, j);
        CHECK(hf.value_at(x, y) == h.map().value_at(x, y).apply(f.value_at(x, y)));
      }
  }
}

TEST_CASE("inverse of an automorphism-valued random endomorphism") {
  std::mt19937 rng(5);
  std::vector<WindowInjection> autos{identity_endo(Domain::natural()), table_endo({{0, 3}, {3, 0}}),
                                     table_endo({{1, 2}, {2, 4}, {4, 1}})};
  for (int trial = 0; trial < 20; ++trial) {
    RandomEndo g(grid_map(3, autos, rng));
    CHECK(is_automorphism_valued(g, 8));
    auto f = grid_map(2, std::vector<Point>{0, 1, 2, 3, 4}, rng, true);
    CHECK(apply(inverse(g), apply(g, f)) == f);
  }
  CHECK_FALSE(is_automorphism_valued(RandomEndo::constant(successor_endo()), 8));
}

TEST_CASE("factoring through a representative") {
  const Point N = 16;
  auto h = table_endo({{0, 2}, {2, 0}});
  auto g = factor_through(h, identity_endo(Domain::natural()), N);
  REQUIRE(g);
  CHECK(*g == h);

  // shift(3) through successor: g takes 0 and 1 to the remaining roots and shifts the rest.
  auto s3 = shift_endo(3);
  auto s1 = successor_endo();
  REQUIRE_FALSE(factor_through(s3, s1, N).has_value());
  auto tbl = table_endo({{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  auto comp = compose(tbl, s1);
  auto f = factor_through(comp, s1, N);
  REQUIRE(f);
  CHECK(is_automorphism_on_window(*f, N));
  for (Point x = 0; x < N; ++x) CHECK(f->apply(s1.apply(x)) == comp.apply(x));
}

TEST_CASE("orbit reduction") {
  const Point N = 24;
  auto id = identity_endo(Domain::natural());
  auto succ = successor_endo();
  auto swap = table_endo({{4, 9}, {9, 4}});
  std::vector<StepMap<WindowInjection>::Cell> cells{
      {RationalSet::vertical_strip({r(0), r(1, 3)}), compose(swap, succ)},
      {RationalSet::vertical_strip({r(1, 3), r(2, 3)}), swap},
      {RationalSet::vertical_strip({r(2, 3), r(1)}), succ}};
  RandomEndo h(StepMap<WindowInjection>::from_cells(cells));
  std::vector<WindowInjection> reps{id, succ};
  auto red = orbit_reduce(h, reps, N);
  CHECK(is_automorphism_valued(red.g, N));
  for (unsigned i = 0; i < 6; ++i) {
    auto [x, y] = mid(6, i, i);
    const auto& k = red.assignment.value_at(x, y);
    CHECK(k == (i < 2 || i >= 4 ? 1u : 0u));
    for (Point a = 0; a < N; ++a)
      CHECK(red.g.map().value_at(x, y).apply(reps[k].apply(a)) == h.map().value_at(x, y).apply(a));
  }

  RandomEndo bad = RandomEndo::constant(shift_endo(2));
  CHECK_THROWS_AS(orbit_reduce(bad, reps, N), NoRepresentativeMatch);
  auto pure_reps = pure_set_representatives(bad, N);
  REQUIRE(pure_reps.size() == 1);
  CHECK(pure_reps.front() == shift_endo(2));
}

TEST_CASE("approximation by random automorphisms") {
  const Point N = 64;
  auto succ = successor_endo();
  auto id = identity_endo(Domain::natural());
  auto h = RandomEndo::constant(succ);
  auto res = approximate_random_endo(h, {succ}, r(1, 10), N);
  REQUIRE(res.families.size() == 1);
  CHECK(res.families.front().n == 10);
  CHECK(res.bound == r(1, 10));
  CHECK(is_automorphism_valued(res.result, N));
  CHECK(worst_case_distance(res.result, h, window_alphabet(N)) <= res.bound);

  std::vector<StepMap<WindowInjection>::Cell> cells{{RationalSet::vertical_strip({r(0), r(1, 2)}), succ},
                                                    {RationalSet::vertical_strip({r(1, 2), r(1)}), id}};
  RandomEndo two(StepMap<WindowInjection>::from_cells(cells));
  auto res2 = approximate_random_endo(two, {id, succ}, r(1, 4), N);
  CHECK(res2.bound == r(1, 8));
  CHECK(worst_case_distance(res2.result, two, window_alphabet(N)) <= res2.bound);

  // Exactness of the bound for a range of epsilons.
  for (long den = 1; den <= 12; ++den) {
    auto a = approximate_random_endo(h, {succ}, r(1, den), N);
    CHECK(a.bound == r(1, den));
    CHECK(worst_case_distance(a.result, h, window_alphabet(N)) == a.bound);
  }

  CHECK_THROWS_AS(approximate_random_endo(h, {succ}, r(0), N), std::invalid_argument);
  auto lin = RandomEndo::constant(basis_shift_endo(2));
  CHECK_THROWS_AS(approximate_random_endo(lin, {basis_shift_endo(2)}, r(1, 4), 16), std::invalid_argument);
}

TEST_CASE("distance to the image of a random endomorphism") {
  // Constant successor misses 0 everywhere.
  auto succ = RandomEndo::constant(successor_endo());
  CHECK(dist_to_image(RandomVariable::constant(0), succ) == 1);
  CHECK(dist_to_image(RandomVariable::constant(5), succ) == 0);
  // Half the fibre maps 3 from a point, the other half never reaches 0.
  std::vector<StepMap<WindowInjection>::Cell> cells{
      {RationalSet::rectangle(r(0), r(1), r(0), r(1, 2)), identity_endo(Domain::natural())},
      {RationalSet::rectangle(r(0), r(1), r(1, 2), r(1)), successor_endo()}};
  RandomEndo half(StepMap<WindowInjection>::from_cells(cells));
  CHECK(dist_to_image(RandomVariable::constant(0), half) == r(1, 2));
  CHECK(dist_to_image(RandomVariable::constant(3), half) == r(1, 2));

  std::mt19937 rng(11);
  const auto endos = small_endos();
  std::vector<Point> points{0, 1, 2, 3, 5, 7, 8};
  for (int trial = 0; trial < 150; ++trial) {
    RandomEndo h(grid_map(trial % 2 ? 2 : 3, endos, rng));
    auto f = grid_map(trial % 3 ? 2 : 4, points, rng);
    const unsigned L = 12;
    CHECK(dist_to_image(f, h) == grid_dist_to_image(f, h, L, 16));
  }
  // An image is at distance zero from itself.
  for (int trial = 0; trial < 50; ++trial) {
    RandomEndo h(grid_map(3, endos, rng));
    auto f = grid_map(2, points, rng, true);
    CHECK(dist_to_image(apply(h, f), h) == 0);
  }
}

TEST_CASE("hausdorff gap bounds") {
  const Point N = 12;
  const auto alphabet = window_alphabet(N);
  auto id = RandomEndo::constant(identity_endo(Domain::natural()));
  auto succ = RandomEndo::constant(successor_endo());
  auto same = hausdorff_gap(id, id, alphabet);
  CHECK(same.upper == 0);
  CHECK(same.lower == 0);
  auto far = hausdorff_gap(id, succ, alphabet);
  CHECK(far.upper == 1);
  CHECK(far.lower == 1);

  std::mt19937 rng(17);
  const auto endos = small_endos();
  for (int trial = 0; trial < 60; ++trial) {
    RandomEndo g(grid_map(2, endos, rng)), h(grid_map(3, endos, rng));
    auto gap = hausdorff_gap(g, h, alphabet, 4, trial);
    CHECK(gap.lower <= gap.upper);
    CHECK(gap.upper <= 1);
    // The upper bound dominates every vertical-strip probe.
    for (int p = 0; p < 10; ++p) {
      auto f = grid_map(3, alphabet, rng, true);
      CHECK(l1_distance(apply(g, f), apply(h, f)) <= gap.upper);
    }
    // Symmetry.
    auto back = hausdorff_gap(h, g, alphabet, 4, trial);
    CHECK(back.upper == gap.upper);
  }
}

TEST_CASE("certifying epsilon-isomorphisms of pure-set pairs") {
  const Point N = 40;
  auto id = RandomEndo::constant(identity_endo(Domain::natural()));
  auto succ = RandomEndo::constant(successor_endo());
  PairModel a{Domain::natural(), N, 0, id};
  PairModel b{Domain::natural(), N, 0, succ};

  auto same = certify_epsilon_isomorphism(a, a, r(1, 100));
  CHECK(same.certified);
  CHECK(same.bound == 0);

  auto cert = certify_epsilon_isomorphism(a, b, r(1, 10));
  CHECK(cert.certified);
  CHECK(cert.bound <= r(1, 10));
  CHECK(cert.strips == 10);
  CHECK(is_automorphism_valued(cert.g, N));
  CHECK(worst_case_distance(compose(cert.g, a.image), b.image, window_alphabet(N)) <= r(1, 10));

  auto refused = certify_epsilon_isomorphism(b, a, r(1, 10));
  CHECK_FALSE(refused.certified);

  PairModel c{Domain::fq(2), 4, 2, RandomEndo::constant(identity_endo(Domain::fq(2)))};
  CHECK_THROWS_AS(certify_epsilon_isomorphism(a, c, r(1, 2)), std::invalid_argument);
}

TEST_CASE("F_q pairs are refused with the search attached") {
  auto dom = Domain::fq(2);
  PairModel full{dom, 4, 2, RandomEndo::constant(identity_endo(dom))};
  PairModel line{dom, 4, 2, RandomEndo::constant(basis_shift_endo(2))};
  auto cert = certify_epsilon_isomorphism(full, line, r(1, 4));
  CHECK_FALSE(cert.certified);
  REQUIRE(cert.search.has_value());
  CHECK(cert.search->gap > r(1, 4));
}
