#include "belle/step_map.hpp"

#include <algorithm>

namespace belle {

namespace {

struct Labelled {
  Interval omega_prime;
  std::size_t cell;
};

}  // namespace

void for_each_refined_piece(
    std::span<const PartitionView> partitions,
    const std::function<void(const Interval&, const Interval&, std::span<const std::size_t>)>& fn) {
  std::vector<Rational> xs{Rational{0}, Rational{1}};
  for (const auto& part : partitions)
    for (const auto* region : part)
      for (const auto& slab : region->slabs()) {
        xs.push_back(slab.omega.lo);
        xs.push_back(slab.omega.hi);
      }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::size_t nslabs = xs.size() - 1;

  // buckets[p][k]: the omega'-pieces of partition p above elementary slab k.
  std::vector<std::vector<std::vector<Labelled>>> buckets(partitions.size(),
                                                          std::vector<std::vector<Labelled>>(nslabs));
  for (std::size_t p = 0; p < partitions.size(); ++p)
    for (std::size_t c = 0; c < partitions[p].size(); ++c)
      for (const auto& slab : partitions[p][c]->slabs()) {
        auto first = std::lower_bound(xs.begin(), xs.end(), slab.omega.lo) - xs.begin();
        auto last = std::lower_bound(xs.begin(), xs.end(), slab.omega.hi) - xs.begin();
        for (auto k = first; k < last; ++k)
          for (const auto& iv : slab.fibre) buckets[p][k].push_back({iv, c});
      }

  std::vector<std::size_t> ptr(partitions.size());
  std::vector<std::size_t> index(partitions.size());
  for (std::size_t k = 0; k < nslabs; ++k) {
    const Interval omega{xs[k], xs[k + 1]};
    for (std::size_t p = 0; p < partitions.size(); ++p) {
      auto& b = buckets[p][k];
      std::sort(b.begin(), b.end(), [](const Labelled& l, const Labelled& r) { return l.omega_prime.lo < r.omega_prime.lo; });
      if (b.empty() || b.front().omega_prime.lo != 0 || b.back().omega_prime.hi != 1)
        throw std::invalid_argument("refinement input does not tile the unit square");
      ptr[p] = 0;
    }
    Rational y{0};
    while (y < 1) {
      Rational next{1};
      for (std::size_t p = 0; p < partitions.size(); ++p) {
        const auto& piece = buckets[p][k][ptr[p]];
        if (piece.omega_prime.lo != y && !(piece.omega_prime.lo < y))
          throw std::invalid_argument("refinement input has a gap");
        index[p] = piece.cell;
        if (piece.omega_prime.hi < next) next = piece.omega_prime.hi;
      }
      fn(omega, Interval{y, next}, index);
      for (std::size_t p = 0; p < partitions.size(); ++p)
        if (buckets[p][k][ptr[p]].omega_prime.hi == next) ++ptr[p];
      y = next;
    }
  }
}

std::vector<RefinedCell> common_refinement(std::span<const PartitionView> partitions) {
  RegionAccumulator<std::vector<std::size_t>> acc;
  std::vector<std::vector<std::size_t>> order;
  std::map<std::vector<std::size_t>, bool> seen;
  for_each_refined_piece(partitions, [&](const Interval& x, const Interval& y, std::span<const std::size_t> idx) {
    std::vector<std::size_t> key(idx.begin(), idx.end());
    if (seen.emplace(key, true).second) order.push_back(key);
    acc.add(key, x, y);
  });
  std::map<std::vector<std::size_t>, RationalSet> regions;
  for (auto& [key, region] : acc.take()) regions.emplace(key, std::move(region));
  std::vector<RefinedCell> out;
  out.reserve(order.size());
  for (auto& key : order) out.push_back({std::move(regions.at(key)), key});
  return out;
}

}  // namespace belle
