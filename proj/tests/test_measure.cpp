#include "belle/step_map.hpp"

#include <doctest.h>

#include <random>

using namespace belle;

namespace {

Rational r(long p, long q = 1) { return make_rational(p, q); }

// Slice measure of s at omega, by scanning its rectangles directly.
Rational slice_at(const RationalSet& s, const Rational& omega) {
  Rational total{0};
  for (const auto& rect : s.rects())
    if (rect.omega.contains(omega)) total += rect.omega_prime.length();
  return total;
}

RationalSet random_set(std::mt19937& rng, int grid) {
  std::uniform_int_distribution<int> coin(0, 2);
  std::vector<Rect> rects;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      if (coin(rng) == 0) rects.push_back(make_rect(r(i, grid), r(i + 1, grid), r(j, grid), r(j + 1, grid)));
  return RationalSet::from_rects(rects);
}

StepMap<int> random_map(std::mt19937& rng, int grid, int alphabet) {
  std::uniform_int_distribution<int> pick(0, alphabet - 1);
  std::vector<StepMap<int>::Cell> cells;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      cells.push_back({RationalSet::rectangle(r(i, grid), r(i + 1, grid), r(j, grid), r(j + 1, grid)), pick(rng)});
  return StepMap<int>::from_cells(std::move(cells));
}

}  // namespace

TEST_CASE("measure of basic sets") {
  CHECK(measure(RationalSet::full()) == 1);
  CHECK(measure(RationalSet::rectangle(r(0), r(1), r(0), r(1, 2))) == r(1, 2));
  CHECK(measure(RationalSet{}) == 0);
}

TEST_CASE("slice profiles") {
  auto left = RationalSet::rectangle(r(0), r(1, 2), r(0), r(1));
  CHECK(slice_profile(left) == PiecewiseConstant::from_steps({r(1, 2)}, {r(1), r(0)}));
  CHECK(slice_profile(RationalSet::horizontal_strip({r(0), r(1, 3)})) == PiecewiseConstant::constant(r(1, 3)));
  std::vector<Rect> two{make_rect(r(0), r(1, 2), r(0), r(1, 4)), make_rect(r(1, 2), r(1), r(0), r(3, 4))};
  auto s = RationalSet::from_rects(two);
  CHECK(slice_profile(s) == PiecewiseConstant::from_steps({r(1, 2)}, {r(1, 4), r(3, 4)}));
  CHECK(slice_profile(s).integral() == measure(s));
}

TEST_CASE("set algebra and canonical form") {
  auto a = RationalSet::rectangle(r(0), r(1, 2), r(0), r(1));
  auto b = RationalSet::rectangle(r(1, 2), r(1), r(0), r(1));
  CHECK(a.unite(b) == RationalSet::full());
  CHECK(a.intersect(b).empty());
  CHECK(a.complement() == b);
  CHECK(RationalSet::full().minus(a) == b);
  // Two halves of a rectangle merge into one canonical rectangle.
  std::vector<Rect> halves{make_rect(r(0), r(1), r(1, 2), r(1)), make_rect(r(0), r(1), r(0), r(1, 2))};
  CHECK(RationalSet::from_rects(halves).rects().size() == 1);
  auto rects = RationalSet::from_rects(halves).rects();
  CHECK(canonicalize(rects) == rects);
  CHECK(a.contains(r(1, 4), r(0)));
  CHECK_FALSE(a.contains(r(1, 2), r(0)));
}

TEST_CASE("vertical split") {
  std::vector<Rational> halves{r(1, 2), r(1, 2)};
  auto parts = vertical_split(RationalSet::full(), halves);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == RationalSet::rectangle(r(0), r(1), r(0), r(1, 2)));
  CHECK(parts[1] == RationalSet::rectangle(r(0), r(1), r(1, 2), r(1)));

  auto s = RationalSet::rectangle(r(0), r(1), r(0), r(1, 2));
  std::vector<Rational> one{r(1)};
  CHECK(vertical_split(s, one) == std::vector<RationalSet>{s});

  std::vector<Rational> w{r(1, 3), r(2, 3)};
  parts = vertical_split(s, w);
  CHECK(parts[0] == RationalSet::rectangle(r(0), r(1), r(0), r(1, 6)));
  CHECK(parts[1] == RationalSet::rectangle(r(0), r(1), r(1, 6), r(1, 2)));
  CHECK(slice_profile(parts[0]) == slice_profile(s).scaled(r(1, 3)));

  std::vector<Rational> bad{r(1, 2), r(1, 3)};
  CHECK_THROWS_AS(vertical_split(s, bad), std::invalid_argument);
  std::vector<Rational> negative{r(3, 2), r(-1, 2)};
  CHECK_THROWS_AS(vertical_split(s, negative), std::invalid_argument);
}

TEST_CASE("vertical split slices match weights at every omega") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_set(rng, 4);
    std::vector<Rational> w{r(1, 5), r(0), r(3, 10), r(1, 2)};
    auto parts = vertical_split(s, w);
    Rational total{0};
    for (std::size_t i = 0; i < parts.size(); ++i) {
      total += measure(parts[i]);
      for (int k = 0; k < 8; ++k) {
        const Rational omega = r(2 * k + 1, 16);
        CHECK(slice_at(parts[i], omega) == w[i] * slice_at(s, omega));
      }
      for (std::size_t j = i + 1; j < parts.size(); ++j) CHECK_FALSE(parts[i].intersects(parts[j]));
    }
    CHECK(total == measure(s));
  }
}

TEST_CASE("density split") {
  std::vector<PiecewiseConstant> thirds{PiecewiseConstant::constant(r(1, 3)), PiecewiseConstant::constant(r(2, 3))};
  auto parts = density_split(RationalSet::full(), thirds);
  CHECK(parts[0] == RationalSet::rectangle(r(0), r(1), r(0), r(1, 3)));
  CHECK(parts[1] == RationalSet::rectangle(r(0), r(1), r(1, 3), r(1)));

  std::vector<PiecewiseConstant> indicator{PiecewiseConstant::from_steps({r(1, 2)}, {r(1), r(0)}),
                                           PiecewiseConstant::from_steps({r(1, 2)}, {r(0), r(1)})};
  parts = density_split(RationalSet::full(), indicator);
  CHECK(parts[0] == RationalSet::vertical_strip({r(0), r(1, 2)}));
  CHECK(parts[1] == RationalSet::vertical_strip({r(1, 2), r(1)}));

  auto lower = RationalSet::rectangle(r(0), r(1), r(0), r(1, 2));
  std::vector<PiecewiseConstant> quarters{PiecewiseConstant::constant(r(1, 4)), PiecewiseConstant::constant(r(1, 4))};
  parts = density_split(lower, quarters);
  CHECK(slice_profile(parts[0]) == PiecewiseConstant::constant(r(1, 4)));
  CHECK(slice_profile(parts[1]) == PiecewiseConstant::constant(r(1, 4)));

  std::vector<PiecewiseConstant> short_sum{PiecewiseConstant::constant(r(1, 4)), PiecewiseConstant::constant(r(1, 8))};
  try {
    density_split(lower, short_sum);
    FAIL("expected a density mismatch");
  } catch (const DensityMismatch& e) {
    CHECK(e.expected() == r(1, 2));
    CHECK(e.actual() == r(3, 8));
  }
}

TEST_CASE("l1 distance") {
  std::mt19937 rng(1);
  auto f = random_map(rng, 2, 2);
  CHECK(l1_distance(f, f) == 0);
  CHECK(l1_distance(StepMap<int>::constant(0), StepMap<int>::constant(1)) == 1);
  auto half = vertical_strip_map<int>({r(1, 2)}, {0, 1});
  CHECK(l1_distance(half, StepMap<int>::constant(0)) == r(1, 2));
}

TEST_CASE("l1 distance is a metric on random step maps") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = random_map(rng, 3, 3), g = random_map(rng, 2, 3), h = random_map(rng, 4, 3);
    CHECK(l1_distance(f, h) <= l1_distance(f, g) + l1_distance(g, h));
    CHECK(l1_distance(f, g) == l1_distance(g, f));
  }
}

TEST_CASE("common refinement") {
  auto f = uniform_vertical_strips<int>({0, 1});
  std::vector<PartitionView> one{f.partition()};
  CHECK(common_refinement(one).size() == 2);
  std::vector<PartitionView> same{f.partition(), f.partition()};
  CHECK(common_refinement(same).size() == 2);
  auto g = uniform_horizontal_strips<int>({0, 1});
  std::vector<PartitionView> grid{f.partition(), g.partition()};
  auto cells = common_refinement(grid);
  CHECK(cells.size() == 4);
  for (const auto& c : cells) CHECK(measure(c.region) == r(1, 4));
}

TEST_CASE("step maps canonicalize equal values") {
  auto f = uniform_vertical_strips<int>({5, 5, 5});
  CHECK(f.size() == 1);
  CHECK(f == StepMap<int>::constant(5));
  CHECK(f.is_first_coordinate_only());
  CHECK_FALSE(uniform_horizontal_strips<int>({1, 2}).is_first_coordinate_only());
  std::vector<StepMap<int>::Cell> overlapping{{RationalSet::full(), 0}, {RationalSet::full(), 1}};
  CHECK_THROWS_AS(StepMap<int>::from_cells(overlapping), std::invalid_argument);
  auto g = combine(uniform_vertical_strips<int>({1, 2}), uniform_horizontal_strips<int>({10, 20}),
                   [](int a, int b) { return a + b; });
  CHECK(g.size() == 4);
  CHECK(g.value_at(r(3, 4), r(3, 4)) == 22);
}
