#pragma once

// Random instance generators shared by the unit and acceptance tests.

#include "belle/realization.hpp"

#include <random>

namespace belle::testing {

inline Rational rq(long p, long q = 1) { return make_rational(p, q); }

/// Splits `total` into `parts` non-negative rationals with denominators dividing 12.
inline std::vector<Rational> random_split(const Rational& total, std::size_t parts, std::mt19937& rng) {
  std::uniform_int_distribution<int> w(0, 3);
  std::vector<int> weights(parts);
  int sum = 0;
  for (auto& x : weights) sum += (x = w(rng));
  if (sum == 0) {
    weights[0] = 1;
    sum = 1;
  }
  std::vector<Rational> out;
  for (int x : weights) {
    Rational v = total * Rational(x) / Rational(sum);
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

/// A spec on a k x k grid: cells assigned to groups at random, each group with
/// up to `values` pieces whose densities split the home slice column by column.
inline RealizationSpec random_realization_spec(std::mt19937& rng, std::size_t max_groups = 3, Point values = 4,
                                               unsigned k = 4) {
  std::uniform_int_distribution<std::size_t> group_count(1, max_groups);
  const std::size_t groups = group_count(rng);
  std::uniform_int_distribution<std::size_t> pick_group(0, groups - 1);
  std::vector<std::vector<Rect>> homes(groups);
  // Guarantee every group a cell.
  std::vector<std::size_t> owner(k * k);
  for (auto& o : owner) o = pick_group(rng);
  for (std::size_t c = 0; c < groups && c < owner.size(); ++c) owner[c * (owner.size() / groups)] = c;
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j)
      homes[owner[i * k + j]].push_back(make_rect(rq(i, k), rq(i + 1, k), rq(j, k), rq(j + 1, k)));

  std::uniform_int_distribution<Point> piece_count(1, values);
  std::uniform_int_distribution<Point> value(0, values - 1);
  RealizationSpec spec;
  for (std::size_t c = 0; c < groups; ++c) {
    RealizationGroup g;
    g.home = RationalSet::from_rects(homes[c]);
    const PiecewiseConstant slice = g.home.slice_profile();
    const std::size_t n = piece_count(rng);
    std::vector<std::vector<Rational>> columns(n);
    std::vector<Rational> breaks;
    for (unsigned i = 0; i < k; ++i) {
      if (i > 0) breaks.push_back(rq(i, k));
      auto split = random_split(slice.value_at(rq(2 * i + 1, 2 * k)), n, rng);
      for (std::size_t q = 0; q < n; ++q) columns[q].push_back(split[q]);
    }
    for (std::size_t q = 0; q < n; ++q)
      g.pieces.push_back({value(rng), PiecewiseConstant::from_steps(breaks, columns[q])});
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

/// Events on random strips, with predicates "value in S" for random S.
inline std::vector<ProbabilityEvent> random_events(std::mt19937& rng, Point values, std::size_t count) {
  std::vector<ProbabilityEvent> events;
  std::uniform_int_distribution<int> lo(0, 5), len(1, 6), mask(0, (1 << values) - 1);
  for (std::size_t e = 0; e < count; ++e) {
    const int a = lo(rng), b = std::min(6, a + len(rng));
    const int m = mask(rng);
    RationalSet strip = RationalSet::vertical_strip({rq(a, 6), rq(std::max(b, a + 1), 6)});
    events.push_back({strip, [m](Point v) { return v < 32 && ((m >> v) & 1); }, "mask " + std::to_string(m)});
  }
  events.push_back({RationalSet::full(), [](Point) { return true; }, "always"});
  return events;
}

}  // namespace belle::testing
