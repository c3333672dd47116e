#include "belle/endo_approx.hpp"

#include <doctest.h>

using namespace belle;

namespace {

Rational r(long p, long q = 1) { return make_rational(p, q); }

// Cycle-closing bijections on a single semi-orbit 0, 1, 2, ..., built from
// explicit block lists rather than position arithmetic.
std::vector<Point> expected_sigma(std::size_t n, std::size_t i, Point N) {
  std::vector<Point> img(static_cast<std::size_t>(N + 2 * n + 2));
  Point start = 0, end = static_cast<Point>(i + 1);
  while (start < img.size()) {
    for (Point x = start; x < end && x < img.size(); ++x) img[x] = x + 1;
    if (end < img.size()) img[end] = start;
    start = end + 1;
    end = start + n - 1;
  }
  img.resize(static_cast<std::size_t>(N));
  return img;
}

}  // namespace

TEST_CASE("orbit decomposition") {
  auto s = orbit_decompose(successor_endo(), 100);
  CHECK(s.semi_orbits == 1);
  for (Point x = 0; x < 100; ++x) {
    CHECK(s.at(x).kind == OrbitKind::semi_orbit);
    CHECK(s.at(x).orbit_id == 0);
    CHECK(s.at(x).position == x);
  }
  auto id = orbit_decompose(identity_endo(), 50);
  CHECK(id.orbits == 50);

  auto two = orbit_decompose(shift_endo(2), 100);
  CHECK(two.semi_orbits == 2);
  for (Point x = 0; x < 100; ++x) {
    // Oracle: walk preimages x, x-2, ... until nothing precedes.
    Point y = x, steps = 0;
    while (y >= 2) {
      y -= 2;
      ++steps;
    }
    CHECK(two.at(x).orbit_id == y);
    CHECK(two.at(x).position == steps);
  }

  auto cyc = orbit_decompose(table_endo({{3, 7}, {7, 5}, {5, 3}}), 10);
  CHECK(cyc.at(7).kind == OrbitKind::orbit);
  CHECK(cyc.at(7).orbit_id == 3);
  CHECK(cyc.at(7).position == 1);
  CHECK(cyc.at(5).position == 2);

  // 0 -> 20 and 20 -> 0 leaves the window [0,10): undetermined.
  auto edge = orbit_decompose(table_endo({{0, 20}, {20, 0}}), 10);
  CHECK(edge.at(0).kind == OrbitKind::undetermined);
  CHECK(edge.undetermined == 1);

  CHECK_THROWS_AS(orbit_decompose(table_endo({{0, 0}, {1, 0}}), 10), NotInjective);
}

TEST_CASE("approximating bijections for the successor") {
  auto sig = approximate_by_automorphisms(successor_endo(), 2);
  CHECK(cycle_notation(sig[0], 6) == "(0 1)(2 3)(4 5)");
  CHECK(cycle_notation(sig[1], 7) == "(0 1 2)(3 4)(5 6)");
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    auto s = approximate_by_automorphisms(successor_endo(), n);
    for (std::size_t i = 0; i < n; ++i) {
      auto expect = expected_sigma(n, i, 2000);
      for (Point x = 0; x < 2000; ++x) CHECK(s[i](x) == expect[x]);
      CHECK(is_automorphism_on_window(s[i], 2000));
    }
  }
}

TEST_CASE("defect profiles") {
  auto tau = successor_endo();
  auto zero = defect_profile(tau, {tau}, 100);
  CHECK(zero.max_defect == 0);
  auto two = defect_profile(tau, approximate_by_automorphisms(tau, 2), 10'000);
  CHECK(two.max_defect == 1);
  auto ones = defect_profile(tau, {identity_endo()}, 100);
  CHECK(ones.histogram.at(1) == 100);
  auto three = defect_profile(tau, approximate_by_automorphisms(tau, 3), 10'000);
  CHECK(three.max_defect == 1);
  // Every point past the root lies in exactly one block-end sequence.
  for (Point x = 1; x < 10'000; ++x) CHECK(three.counts[x] == 1);
  CHECK(three.counts[0] == 0);

  for (const auto& t : {shift_endo(2), basis_shift_endo(2), table_endo({{0, 1}, {1, 0}})}) {
    for (std::size_t n : {1u, 4u, 7u}) {
      auto s = approximate_by_automorphisms(t, n);
      CHECK(defect_profile(t, s, 4096).max_defect <= 1);
      for (const auto& g : s) CHECK(is_automorphism_on_window(g, 4096));
    }
  }
  // Bijective tau: every sigma equals tau.
  auto swap = table_endo({{0, 1}, {1, 0}});
  CHECK(defect_profile(swap, approximate_by_automorphisms(swap, 5), 100).max_defect == 0);
}

TEST_CASE("strip lifts") {
  CHECK(strip_lift({successor_endo()}) == RandomEndo::constant(successor_endo()));
  CHECK(strip_lift({identity_endo(), identity_endo(), identity_endo()}) == RandomEndo());
  CHECK_THROWS_AS(strip_lift({}), std::invalid_argument);

  auto tau = successor_endo();
  auto lift = strip_lift(approximate_by_automorphisms(tau, 10));
  auto f = RandomVariable::constant(1);
  auto gf = apply(lift, f);
  auto hf = apply(RandomEndo::constant(tau), f);
  CHECK(l1_distance(gf, hf) == r(1, 10));
}
