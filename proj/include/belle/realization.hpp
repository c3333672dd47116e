#pragma once

// Realizing prescribed cellwise probabilities: from densities delta_q over
// omega and home sets A_c, a step map f taking a_q on a part A_q of A_c whose
// slices have measure delta_q(omega).

#include "belle/step_map.hpp"
#include "belle/structures.hpp"

#include <functional>
#include <string>
#include <vector>

namespace belle {

struct RealizationPiece {
  Point value;
  PiecewiseConstant density;
};

struct RealizationGroup {
  RationalSet home;
  std::vector<RealizationPiece> pieces;
};

struct RealizationSpec {
  std::vector<RealizationGroup> groups;

  /// Throws std::invalid_argument unless the home sets partition the square
  /// and every group has a piece, DensityMismatch if the densities of a group
  /// do not sum to the slice measure of its home.
  void validate() const;
};

/// f = a_q on A_q, where {A_q} = density_split(A_c, {delta_q}) per group.
StepMap<Point> assemble_realization(const RealizationSpec& spec);

struct ProbabilityEvent {
  /// A vertical strip B_b.
  RationalSet strip;
  std::function<bool(Point)> predicate;
  std::string label;
};

struct EventCheck {
  std::size_t event = 0;
  std::size_t group = 0;
  /// mu([predicate(f)] n B_b n A_c).
  Rational measured;
  /// Sum of the integrals of delta_q over B_b for the q whose value satisfies the predicate.
  Rational predicted;
  bool ok = false;
};

struct IdentityReport {
  bool passed = true;
  std::vector<EventCheck> checks;
};

/// One check per (event, group). Throws std::invalid_argument if a strip is
/// not a vertical strip.
IdentityReport verify_probability_identity(const StepMap<Point>& f, const RealizationSpec& spec,
                                           const std::vector<ProbabilityEvent>& events, unsigned jobs = 1);

}  // namespace belle
