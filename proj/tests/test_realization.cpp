#include "belle/realization.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace belle;
using belle::testing::rq;

TEST_CASE("single piece fills its home") {
  RealizationSpec spec{{{RationalSet::full(), {{7, PiecewiseConstant::constant(rq(1))}}}}};
  auto f = assemble_realization(spec);
  CHECK(f == StepMap<Point>::constant(7));
}

TEST_CASE("two constant densities stack") {
  RealizationSpec spec{{{RationalSet::full(),
                         {{0, PiecewiseConstant::constant(rq(1, 3))}, {1, PiecewiseConstant::constant(rq(2, 3))}}}}};
  auto f = assemble_realization(spec);
  REQUIRE(f.size() == 2);
  CHECK(f.value_at(rq(1, 2), rq(1, 4)) == 0);
  CHECK(f.value_at(rq(1, 2), rq(1, 2)) == 1);
  CHECK(f.cells()[0].region == RationalSet::rectangle(rq(0), rq(1), rq(0), rq(1, 3)));
}

TEST_CASE("left and right groups split independently") {
  RealizationGroup left{RationalSet::vertical_strip({rq(0), rq(1, 2)}),
                        {{0, PiecewiseConstant::from_steps({rq(1, 2)}, {rq(1, 4), rq(0)})},
                         {1, PiecewiseConstant::from_steps({rq(1, 2)}, {rq(3, 4), rq(0)})}}};
  RealizationGroup right{RationalSet::vertical_strip({rq(1, 2), rq(1)}),
                         {{2, PiecewiseConstant::from_steps({rq(1, 2)}, {rq(0), rq(1, 2)})},
                          {3, PiecewiseConstant::from_steps({rq(1, 2)}, {rq(0), rq(1, 2)})}}};
  RealizationSpec spec{{left, right}};
  auto f = assemble_realization(spec);
  // Marginals by direct measure.
  Rational mass[4] = {Rational(0), Rational(0), Rational(0), Rational(0)};
  for (const auto& c : f.cells()) mass[c.value] += c.region.measure();
  CHECK(mass[0] == rq(1, 8));
  CHECK(mass[1] == rq(3, 8));
  CHECK(mass[2] == rq(1, 4));
  CHECK(mass[3] == rq(1, 4));

  std::vector<ProbabilityEvent> events{
      {RationalSet::vertical_strip({rq(1, 4), rq(3, 4)}), [](Point v) { return v == 1 || v == 2; }, "mixed"},
      {RationalSet::full(), [](Point v) { return v == 3; }, "single"},
      {RationalSet::full(), [](Point) { return true; }, "always"}};
  auto report = verify_probability_identity(f, spec, events);
  CHECK(report.passed);
  CHECK(report.checks.size() == 6);
  // mixed: 3/4 * 1/4 on the left, 1/2 * 1/4 on the right.
  CHECK(report.checks[0].measured == rq(3, 16));
  CHECK(report.checks[1].measured == rq(1, 8));
}

TEST_CASE("density violations name the interval") {
  RealizationSpec bad{{{RationalSet::full(),
                        {{0, PiecewiseConstant::from_steps({rq(1, 2)}, {rq(1, 2), rq(1, 3)})},
                         {1, PiecewiseConstant::constant(rq(1, 2))}}}}};
  try {
    assemble_realization(bad);
    FAIL("expected a density mismatch");
  } catch (const DensityMismatch& e) {
    CHECK(e.where().lo == rq(1, 2));
    CHECK(e.where().hi == 1);
  }
  RealizationSpec partial{{{RationalSet::vertical_strip({rq(0), rq(1, 2)}),
                            {{0, PiecewiseConstant::from_steps({rq(1, 2)}, {rq(1), rq(0)})}}}}};
  CHECK_THROWS_AS(assemble_realization(partial), std::invalid_argument);
  RealizationSpec overlap{{{RationalSet::full(), {{0, PiecewiseConstant::constant(rq(1))}}},
                           {RationalSet::full(), {{1, PiecewiseConstant::constant(rq(1))}}}}};
  CHECK_THROWS_AS(assemble_realization(overlap), std::invalid_argument);
}

TEST_CASE("round trip on random specs") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    auto spec = belle::testing::random_realization_spec(rng);
    auto f = assemble_realization(spec);
    // Independent check through slice profiles: the slices of f = a inside
    // A_c are the summed densities of the pieces carrying a.
    for (const auto& g : spec.groups) {
      Rational home_total{0};
      for (Point a = 0; a < 4; ++a) {
        PiecewiseConstant expected = PiecewiseConstant::constant(rq(0));
        for (const auto& p : g.pieces)
          if (p.value == a) expected = expected + p.density;
        RationalSet level;
        for (const auto& c : f.cells())
          if (c.value == a) level = level.unite(c.region);
        CHECK(level.intersect(g.home).slice_profile() == expected);
        home_total += level.intersect(g.home).measure();
      }
      CHECK(home_total == g.home.measure());
    }
    auto events = belle::testing::random_events(rng, 4, 6);
    CHECK(verify_probability_identity(f, spec, events, trial % 3 + 1).passed);
  }
}

TEST_CASE("a wrong map is caught") {
  RealizationSpec spec{{{RationalSet::full(),
                         {{0, PiecewiseConstant::constant(rq(1, 3))}, {1, PiecewiseConstant::constant(rq(2, 3))}}}}};
  auto wrong = StepMap<Point>::constant(0);
  std::vector<ProbabilityEvent> events{{RationalSet::full(), [](Point v) { return v == 0; }, "zero"}};
  auto report = verify_probability_identity(wrong, spec, events);
  CHECK_FALSE(report.passed);
  CHECK(report.checks[0].measured == 1);
  CHECK(report.checks[0].predicted == rq(1, 3));
  std::vector<ProbabilityEvent> diagonal{{RationalSet::rectangle(rq(0), rq(1), rq(0), rq(1, 2)), [](Point) { return true; }, "x"}};
  CHECK_THROWS_AS(verify_probability_identity(wrong, spec, diagonal), std::invalid_argument);
}
