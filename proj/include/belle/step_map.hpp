#pragma once

// Finite-image random variables on the unit square. A StepMap<V> is a finite
// partition of [0,1)^2 into RationalSets, each labelled with a value in V.
// Canonical form: one cell per distinct value, cells sorted by the first
// rectangle of their region. V must be copyable, equality- and
// less-than-comparable.

#include "belle/rational_set.hpp"

#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace belle {

using PartitionView = std::vector<const RationalSet*>;

/// Calls fn(omega, omega', index) for every piece of the common refinement of
/// the given partitions; index[p] is the cell of partition p containing the
/// piece. Pieces arrive slab by slab (omega ascending), omega' ascending
/// within a slab. Each partition must tile the unit square.
void for_each_refined_piece(
    std::span<const PartitionView> partitions,
    const std::function<void(const Interval&, const Interval&, std::span<const std::size_t>)>& fn);

struct RefinedCell {
  RationalSet region;
  std::vector<std::size_t> index;
};

/// Shared partition on which every input is constant. At most
/// prod |partition_p| cells, returned in order of first appearance.
std::vector<RefinedCell> common_refinement(std::span<const PartitionView> partitions);

/// Groups streamed pieces into one region per key.
template <class K>
class RegionAccumulator {
 public:
  void add(const K& key, const Interval& omega, const Interval& omega_prime) {
    auto& slabs = groups_[key];
    if (!slabs.empty() && slabs.back().omega == omega) slabs.back().fibre.push_back(omega_prime);
    else slabs.push_back({omega, {omega_prime}});
  }

  std::vector<std::pair<K, RationalSet>> take() {
    std::vector<std::pair<K, RationalSet>> out;
    out.reserve(groups_.size());
    for (auto& [key, slabs] : groups_) out.emplace_back(key, RationalSet::from_slabs(std::move(slabs)));
    groups_.clear();
    return out;
  }

 private:
  std::map<K, std::vector<RationalSet::Slab>> groups_;
};

template <class V>
class StepMap {
 public:
  struct Cell {
    RationalSet region;
    V value;
  };

  static StepMap constant(V value) {
    StepMap m;
    m.cells_.push_back({RationalSet::full(), std::move(value)});
    return m;
  }

  /// Validates that the regions partition the unit square, then canonicalizes.
  static StepMap from_cells(std::vector<Cell> cells) {
    Rational total{0};
    std::vector<Rect> all;
    for (const auto& c : cells) {
      total += c.region.measure();
      auto r = c.region.rects();
      all.insert(all.end(), r.begin(), r.end());
    }
    if (total != 1 || RationalSet::from_rects(all).measure() != 1)
      throw std::invalid_argument("step map cells must partition the unit square (total measure " +
                                  to_string(total) + ")");
    return canonical(std::move(cells));
  }

  /// Merges cells with equal values and sorts; the caller guarantees a partition.
  static StepMap canonical(std::vector<Cell> cells) {
    std::map<V, std::vector<Rect>> by_value;
    for (auto& c : cells) {
      if (c.region.empty()) continue;
      auto r = c.region.rects();
      auto& bucket = by_value[c.value];
      bucket.insert(bucket.end(), r.begin(), r.end());
    }
    StepMap m;
    for (auto& [value, rects] : by_value) {
      if (rects.empty()) continue;
      m.cells_.push_back({RationalSet::from_rects(rects), value});
    }
    std::sort(m.cells_.begin(), m.cells_.end(), [](const Cell& a, const Cell& b) {
      const auto& ra = a.region.slabs().front();
      const auto& rb = b.region.slabs().front();
      if (ra.omega.lo != rb.omega.lo) return ra.omega.lo < rb.omega.lo;
      return ra.fibre.front().lo < rb.fibre.front().lo;
    });
    return m;
  }

  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  PartitionView partition() const {
    PartitionView p;
    p.reserve(cells_.size());
    for (const auto& c : cells_) p.push_back(&c.region);
    return p;
  }

  std::vector<V> values() const {
    std::vector<V> out;
    for (const auto& c : cells_) out.push_back(c.value);
    return out;
  }

  /// True iff every cell is a union of vertical strips, i.e. the map depends
  /// only on omega and represents an element of M^Omega.
  bool is_first_coordinate_only() const {
    for (const auto& c : cells_)
      if (!c.region.is_vertical_strip()) return false;
    return true;
  }

  const V& value_at(const Rational& omega, const Rational& omega_prime) const {
    for (const auto& c : cells_)
      if (c.region.contains(omega, omega_prime)) return c.value;
    throw std::out_of_range("point outside the unit square");
  }

  template <class F>
  auto map(F&& fn) const -> StepMap<std::decay_t<std::invoke_result_t<F, const V&>>> {
    using W = std::decay_t<std::invoke_result_t<F, const V&>>;
    std::vector<typename StepMap<W>::Cell> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back({c.region, fn(c.value)});
    return StepMap<W>::canonical(std::move(out));
  }

  friend bool operator==(const StepMap& a, const StepMap& b) {
    if (a.cells_.size() != b.cells_.size()) return false;
    for (std::size_t i = 0; i < a.cells_.size(); ++i)
      if (!(a.cells_[i].region == b.cells_[i].region) || !(a.cells_[i].value == b.cells_[i].value)) return false;
    return true;
  }

 private:
  std::vector<Cell> cells_;
};

/// Cellwise combination on the common refinement: result(x) = fn(a(x), b(x)).
template <class A, class B, class F>
auto combine(const StepMap<A>& a, const StepMap<B>& b, F&& fn)
    -> StepMap<std::decay_t<std::invoke_result_t<F, const A&, const B&>>> {
  using R = std::decay_t<std::invoke_result_t<F, const A&, const B&>>;
  const std::vector<PartitionView> parts{a.partition(), b.partition()};
  RegionAccumulator<std::pair<std::size_t, std::size_t>> acc;
  for_each_refined_piece(parts, [&](const Interval& x, const Interval& y, std::span<const std::size_t> idx) {
    acc.add({idx[0], idx[1]}, x, y);
  });
  std::vector<typename StepMap<R>::Cell> cells;
  for (auto& [key, region] : acc.take())
    cells.push_back({std::move(region), fn(a.cells()[key.first].value, b.cells()[key.second].value)});
  return StepMap<R>::canonical(std::move(cells));
}

/// mu of the disagreement set [f != g], exactly.
template <class V>
Rational l1_distance(const StepMap<V>& f, const StepMap<V>& g) {
  const std::vector<PartitionView> parts{f.partition(), g.partition()};
  Rational total{0};
  for_each_refined_piece(parts, [&](const Interval& x, const Interval& y, std::span<const std::size_t> idx) {
    if (!(f.cells()[idx[0]].value == g.cells()[idx[1]].value)) total += x.length() * y.length();
  });
  return total;
}

/// A step map depending only on omega: value[i] on [breaks[i-1], breaks[i]).
template <class V>
StepMap<V> vertical_strip_map(const std::vector<Rational>& breaks, const std::vector<V>& values) {
  if (values.size() != breaks.size() + 1)
    throw std::invalid_argument("vertical_strip_map needs one more value than breakpoints");
  std::vector<typename StepMap<V>::Cell> cells;
  Rational lo{0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    Rational hi = i < breaks.size() ? breaks[i] : Rational{1};
    cells.push_back({RationalSet::vertical_strip({lo, hi}), values[i]});
    lo = hi;
  }
  return StepMap<V>::from_cells(std::move(cells));
}

/// Equal-width vertical strips.
template <class V>
StepMap<V> uniform_vertical_strips(const std::vector<V>& values) {
  std::vector<Rational> breaks;
  const auto n = static_cast<long>(values.size());
  for (long i = 1; i < n; ++i) breaks.push_back(Rational(i, n));
  for (auto& b : breaks) b.canonicalize();
  return vertical_strip_map(breaks, values);
}

/// Equal-height horizontal strips [0,1) x [i/n, (i+1)/n).
template <class V>
StepMap<V> uniform_horizontal_strips(const std::vector<V>& values) {
  if (values.empty()) throw std::invalid_argument("need at least one strip");
  const auto n = static_cast<long>(values.size());
  std::vector<typename StepMap<V>::Cell> cells;
  for (long i = 0; i < n; ++i) {
    Rational lo(i, n), hi(i + 1, n);
    lo.canonicalize();
    hi.canonicalize();
    cells.push_back({RationalSet::horizontal_strip({lo, hi}), values[static_cast<std::size_t>(i)]});
  }
  return StepMap<V>::canonical(std::move(cells));
}

}  // namespace belle
