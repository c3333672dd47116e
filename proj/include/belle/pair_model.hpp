#pragma once

// Orbit reduction of random endomorphisms against representatives, their
// approximation by random automorphisms, distances to submodel images, and
// certification of epsilon-isomorphisms between pairs.

#include "belle/endo_approx.hpp"
#include "belle/geometry_bounds.hpp"

#include <optional>
#include <string>
#include <vector>

namespace belle {

class NoRepresentativeMatch : public std::runtime_error {
 public:
  NoRepresentativeMatch(std::size_t cell, const std::string& value);
  std::size_t cell() const { return cell_; }

 private:
  std::size_t cell_;
};

/// The bijection g with g o rep = h: g(rep(x)) = h(x), and the window roots
/// of rep paired in order with those of h. Checked on [0, N).
/// Returns nullopt if h does not factor through rep on the window.
std::optional<WindowInjection> factor_through(const WindowInjection& h, const WindowInjection& rep, Point N);

struct OrbitReduction {
  /// Automorphism-valued.
  RandomEndo g;
  StepMap<std::size_t> assignment;
};

/// Factors every cell value h of h_hat as g o reps[k], k the lowest index that
/// works on [0, N). Throws NoRepresentativeMatch.
OrbitReduction orbit_reduce(const RandomEndo& h_hat, const std::vector<WindowInjection>& reps, Point N);

/// Representatives x -> x + c, one per distinct window root count c of the cell values.
std::vector<WindowInjection> pure_set_representatives(const RandomEndo& h_hat, Point N);

struct RepresentativeFamily {
  std::size_t rep = 0;
  RationalSet region;
  std::size_t n = 1;
  std::uint32_t max_defect = 0;
};

struct RandomApproximation {
  RandomEndo result;
  /// sum_k mu(Omega^2_k) * max_defect_k / n_k.
  Rational bound;
  std::vector<RepresentativeFamily> families;
};

/// Random automorphism within eps of h_hat on every vertical-strip random
/// variable over [0, N). Throws NoRepresentativeMatch, or
/// std::invalid_argument for eps <= 0 or a non-bijective linear representative.
RandomApproximation approximate_random_endo(const RandomEndo& h_hat, const std::vector<WindowInjection>& reps,
                                            const Rational& eps, Point N);

/// d(f, h_hat(M^Omega)): the integral over omega of the best slice agreement.
Rational dist_to_image(const RandomVariable& f, const RandomEndo& h_hat);

/// Exactly sup over vertical-strip f with values in `alphabet` of d(g f, h f).
Rational worst_case_distance(const RandomEndo& g, const RandomEndo& h, const std::vector<Point>& alphabet);

struct GapBounds {
  Rational upper;
  Rational lower;
};

/// lower <= d_H(g(M^Omega), h(M^Omega)) <= upper relative to the alphabet.
/// upper integrates the worst slice disagreement over omega; lower maximizes
/// dist_to_image over constants, per-slab worst points, and `extra_probes`
/// seeded random vertical-strip maps.
GapBounds hausdorff_gap(const RandomEndo& g, const RandomEndo& h, const std::vector<Point>& alphabet,
                        std::size_t extra_probes = 8, std::uint64_t seed = 0);

std::vector<Point> window_alphabet(Point N);

struct PairModel {
  Domain domain;
  /// Window size: points [0, window) for the pure set, q^dim for F_q^dim.
  Point window = 0;
  /// Dimension of the window when domain is F_q vectors.
  unsigned dim = 0;
  RandomEndo image;
};

struct Certificate {
  bool certified = false;
  std::string reason;
  RandomEndo g;
  Rational bound;
  GapBounds gap;
  std::size_t strips = 0;
  std::optional<SearchResult> search;
};

/// An automorphism-valued g with hausdorff_gap(g . pair1.image, pair2.image).upper <= eps,
/// or a refusal. Throws std::invalid_argument on mismatched structures.
Certificate certify_epsilon_isomorphism(const PairModel& pair1, const PairModel& pair2, const Rational& eps,
                                        unsigned grid = 2, unsigned jobs = 1);

}  // namespace belle
