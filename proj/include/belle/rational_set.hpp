#pragma once

// Finite unions of half-open rational rectangles inside the unit square
// Omega x Omega'. The first coordinate is called omega, the second omega'.
//
// A RationalSet is always stored in canonical vertical-slab form: a sorted
// list of disjoint omega-intervals ("slabs"), each carrying the sorted,
// disjoint, maximal list of omega'-intervals above it. Adjacent slabs with
// equal fibres are merged, so equal point sets have equal representations.

#include "belle/rational.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace belle {

/// Half-open [lo, hi) with lo < hi.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Rect {
  Interval omega;
  Interval omega_prime;

  Rational area() const { return omega.length() * omega_prime.length(); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect make_rect(const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1);

class PiecewiseConstant;

class RationalSet {
 public:
  struct Slab {
    Interval omega;
    std::vector<Interval> fibre;
    friend bool operator==(const Slab&, const Slab&) = default;
  };

  RationalSet() = default;

  static RationalSet full();
  static RationalSet rectangle(const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1);
  static RationalSet from_rects(std::span<const Rect> rects);
  static RationalSet vertical_strip(const Interval& omega);
  static RationalSet horizontal_strip(const Interval& omega_prime);

  bool empty() const { return slabs_.empty(); }
  const std::vector<Slab>& slabs() const { return slabs_; }
  /// Canonical rectangle list, sorted by (omega start, omega' start).
  std::vector<Rect> rects() const;
  Rational measure() const;
  PiecewiseConstant slice_profile() const;
  /// True iff the set is a union of full-height strips I x [0,1).
  bool is_vertical_strip() const;
  /// The omega-intervals where the fibre is non-empty.
  std::vector<Interval> omega_support() const;
  bool contains(const Rational& omega, const Rational& omega_prime) const;

  RationalSet unite(const RationalSet& other) const;
  RationalSet intersect(const RationalSet& other) const;
  RationalSet minus(const RationalSet& other) const;
  RationalSet complement() const;
  bool intersects(const RationalSet& other) const;

  friend bool operator==(const RationalSet&, const RationalSet&) = default;

  /// Assembles a set from slabs that are already sorted and disjoint; fibres
  /// are merged and adjacent equal slabs fused.
  static RationalSet from_slabs(std::vector<Slab> slabs);

 private:
  std::vector<Slab> slabs_;
};

/// Piecewise-constant function of omega on [0,1): slice profiles and densities.
class PiecewiseConstant {
 public:
  struct Piece {
    Interval omega;
    Rational value;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  /// The zero function.
  PiecewiseConstant();
  static PiecewiseConstant constant(const Rational& value);
  /// Pieces must tile [0,1) in order. Adjacent equal values are merged.
  static PiecewiseConstant from_pieces(std::vector<Piece> pieces);
  /// value on [0, breaks[0]), [breaks[0], breaks[1]), ..., [breaks.back(), 1).
  static PiecewiseConstant from_steps(const std::vector<Rational>& breaks, const std::vector<Rational>& values);

  const std::vector<Piece>& pieces() const { return pieces_; }
  Rational value_at(const Rational& omega) const;
  Rational integral() const;
  Rational integral_over(std::span<const Interval> omegas) const;
  std::vector<Rational> breakpoints() const;
  PiecewiseConstant scaled(const Rational& factor) const;

  friend PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b);
  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;

 private:
  std::vector<Piece> pieces_;
};

class DensityMismatch : public std::invalid_argument {
 public:
  DensityMismatch(Interval where, Rational expected, Rational actual);
  const Interval& where() const { return where_; }
  const Rational& expected() const { return expected_; }
  const Rational& actual() const { return actual_; }

 private:
  Interval where_;
  Rational expected_;
  Rational actual_;
};

Rational measure(const RationalSet& s);
PiecewiseConstant slice_profile(const RationalSet& s);

/// Canonical rectangle list of the union of `rects`.
std::vector<Rect> canonicalize(std::span<const Rect> rects);

/// Splits every omega'-interval of s proportionally, so that at every omega
/// the i-th part holds exactly weights[i] of the slice of s.
/// Throws std::invalid_argument on negative weights or weights not summing to 1.
std::vector<RationalSet> vertical_split(const RationalSet& s, std::span<const Rational> weights);

/// Partitions s into parts whose slice profiles are the given densities.
/// Throws DensityMismatch if on some omega-interval the densities do not sum
/// to the slice measure of s, std::invalid_argument on a negative density.
std::vector<RationalSet> density_split(const RationalSet& s, std::span<const PiecewiseConstant> densities);

}  // namespace belle
