#pragma once

// Orbits and semi-orbits of an injection, the n bijections approximating it
// with defect at most one per point, and their lift to horizontal strips.

#include "belle/random_endo.hpp"

#include <map>
#include <string>

namespace belle {

enum class OrbitKind { orbit, semi_orbit, undetermined };

struct PointClass {
  OrbitKind kind = OrbitKind::undetermined;
  /// Smallest point of the cycle for orbits, the root for semi-orbits.
  Point orbit_id = 0;
  /// Steps from orbit_id along tau.
  std::uint64_t position = 0;
};

struct OrbitDecomposition {
  Point window = 0;
  std::vector<PointClass> points;
  std::size_t orbits = 0;
  std::size_t semi_orbits = 0;
  std::size_t undetermined = 0;

  const PointClass& at(Point x) const { return points.at(static_cast<std::size_t>(x)); }
};

/// Classifies every point of [0, N). A point whose preimage chain leaves the
/// window is undetermined. Throws NotInjective.
OrbitDecomposition orbit_decompose(const WindowInjection& tau, Point N);

/// sigma_0, ..., sigma_{n-1}. On semi-orbits x_0, x_1, ... the blocks
/// [0, i+1], [kn+i+2-n, kn+i+1] (k >= 1) become cycles: sigma_i agrees with tau
/// except at block ends, which return to the block start. Elsewhere sigma_i = tau.
std::vector<WindowInjection> approximate_by_automorphisms(const WindowInjection& tau, std::size_t n);

struct DefectProfile {
  std::vector<std::uint32_t> counts;
  std::uint32_t max_defect = 0;
  /// defect value -> number of window points.
  std::map<std::uint32_t, std::uint64_t> histogram;
  /// Points whose orbit position under tau could not be established.
  std::vector<Point> undetermined;
};

/// counts[x] = |{i : sigmas[i](x) != tau(x)}| for x < N.
DefectProfile defect_profile(const WindowInjection& tau, const std::vector<WindowInjection>& sigmas, Point N);

/// g_i on [0,1) x [i/n, (i+1)/n). Throws std::invalid_argument on an empty list.
RandomEndo strip_lift(const std::vector<WindowInjection>& gs);

/// Cycle notation of g restricted to cycles through points < limit, e.g.
/// "(0 1)(2 3)"; cycles longer than max_cycle are cut with "...".
std::string cycle_notation(const WindowInjection& g, Point limit, std::size_t max_cycle = 16);

}  // namespace belle
