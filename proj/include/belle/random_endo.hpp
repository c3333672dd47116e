#pragma once

// Random endomorphisms: step maps on the unit square with values in End(M),
// acting on random variables pointwise.

#include "belle/step_map.hpp"
#include "belle/structures.hpp"

namespace belle {

/// f in M^{Omega^2}; a vertical-strip RandomVariable represents f in M^Omega.
using RandomVariable = StepMap<Point>;

class RandomEndo {
 public:
  /// Constant identity on the natural numbers.
  RandomEndo();
  /// Throws std::invalid_argument if the cell values live on different domains.
  explicit RandomEndo(StepMap<WindowInjection> map);
  static RandomEndo constant(WindowInjection h);

  const StepMap<WindowInjection>& map() const { return map_; }
  Domain domain() const { return map_.cells().front().value.domain(); }
  std::size_t size() const { return map_.size(); }

  friend bool operator==(const RandomEndo& a, const RandomEndo& b) { return a.map_ == b.map_; }

 private:
  StepMap<WindowInjection> map_;
};

/// (h f)(x) = h(x)(f(x)) on the common refinement.
RandomVariable apply(const RandomEndo& h, const RandomVariable& f);
/// Cellwise composition: (g . h)(x) = g(x) o h(x).
RandomEndo compose(const RandomEndo& outer, const RandomEndo& inner);
/// Cellwise inverse; meaningful when every value is a bijection.
RandomEndo inverse(const RandomEndo& g);
/// Every cell value passes is_automorphism_on_window.
bool is_automorphism_valued(const RandomEndo& h, Point N);

}  // namespace belle
