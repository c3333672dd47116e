#include "belle/rational_set.hpp"

#include <algorithm>
#include <utility>

namespace belle {

namespace {

const Rational kZero{0};
const Rational kOne{1};

void check_in_unit(const Rational& lo, const Rational& hi, const char* what) {
  if (!(kZero <= lo && lo < hi && hi <= kOne))
    throw std::invalid_argument(std::string(what) + " interval [" + to_string(lo) + "," + to_string(hi) +
                                ") is empty or leaves [0,1)");
}

using Fibre = std::vector<Interval>;

// Sorts and merges overlapping or touching intervals.
Fibre normalize_fibre(Fibre f) {
  std::sort(f.begin(), f.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Fibre out;
  for (auto& iv : f) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (out.back().hi < iv.hi) out.back().hi = iv.hi;
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

Fibre fibre_union(const Fibre& a, const Fibre& b) {
  Fibre all = a;
  all.insert(all.end(), b.begin(), b.end());
  return normalize_fibre(std::move(all));
}

Fibre fibre_intersect(const Fibre& a, const Fibre& b) {
  Fibre out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Rational& lo = std::max(a[i].lo, b[j].lo);
    const Rational& hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) ++i; else ++j;
  }
  return out;
}

Fibre fibre_minus(const Fibre& a, const Fibre& b) {
  Fibre out;
  std::size_t j = 0;
  for (const auto& iv : a) {
    Rational cur = iv.lo;
    while (j < b.size() && b[j].hi <= cur) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].lo < iv.hi) {
      if (cur < b[k].lo) out.push_back({cur, b[k].lo});
      if (cur < b[k].hi) cur = b[k].hi;
      ++k;
    }
    if (cur < iv.hi) out.push_back({cur, iv.hi});
  }
  return out;
}

Rational fibre_length(const Fibre& f) {
  Rational total{0};
  for (const auto& iv : f) total += iv.length();
  return total;
}

template <class Op>
RationalSet combine(const RationalSet& a, const RationalSet& b, Op op) {
  std::vector<Rational> xs{kZero, kOne};
  for (const auto* s : {&a, &b})
    for (const auto& slab : s->slabs()) {
      xs.push_back(slab.omega.lo);
      xs.push_back(slab.omega.hi);
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const Fibre empty;
  std::vector<RationalSet::Slab> out;
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const Rational& x0 = xs[k];
    while (ia < a.slabs().size() && a.slabs()[ia].omega.hi <= x0) ++ia;
    while (ib < b.slabs().size() && b.slabs()[ib].omega.hi <= x0) ++ib;
    const Fibre& fa = (ia < a.slabs().size() && a.slabs()[ia].omega.lo <= x0) ? a.slabs()[ia].fibre : empty;
    const Fibre& fb = (ib < b.slabs().size() && b.slabs()[ib].omega.lo <= x0) ? b.slabs()[ib].fibre : empty;
    Fibre f = op(fa, fb);
    if (!f.empty()) out.push_back({{x0, xs[k + 1]}, std::move(f)});
  }
  return RationalSet::from_slabs(std::move(out));
}

}  // namespace

Rect make_rect(const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1) {
  return Rect{{x0, x1}, {y0, y1}};
}

// ---------------------------------------------------------------------------
// RationalSet

RationalSet RationalSet::from_slabs(std::vector<Slab> slabs) {
  RationalSet s;
  for (auto& slab : slabs) {
    slab.fibre = normalize_fibre(std::move(slab.fibre));
    if (slab.fibre.empty()) continue;
    if (!s.slabs_.empty() && s.slabs_.back().omega.hi == slab.omega.lo && s.slabs_.back().fibre == slab.fibre) {
      s.slabs_.back().omega.hi = slab.omega.hi;
    } else {
      s.slabs_.push_back(std::move(slab));
    }
  }
  return s;
}

RationalSet RationalSet::full() { return rectangle(kZero, kOne, kZero, kOne); }

RationalSet RationalSet::rectangle(const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1) {
  check_in_unit(x0, x1, "omega");
  check_in_unit(y0, y1, "omega'");
  RationalSet s;
  s.slabs_.push_back({{x0, x1}, {{y0, y1}}});
  return s;
}

RationalSet RationalSet::vertical_strip(const Interval& omega) { return rectangle(omega.lo, omega.hi, kZero, kOne); }

RationalSet RationalSet::horizontal_strip(const Interval& omega_prime) {
  return rectangle(kZero, kOne, omega_prime.lo, omega_prime.hi);
}

RationalSet RationalSet::from_rects(std::span<const Rect> rects) {
  std::vector<Rational> xs;
  xs.reserve(2 * rects.size());
  for (const auto& r : rects) {
    check_in_unit(r.omega.lo, r.omega.hi, "omega");
    check_in_unit(r.omega_prime.lo, r.omega_prime.hi, "omega'");
    xs.push_back(r.omega.lo);
    xs.push_back(r.omega.hi);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 2) return {};

  std::vector<Fibre> buckets(xs.size() - 1);
  for (const auto& r : rects) {
    auto first = std::lower_bound(xs.begin(), xs.end(), r.omega.lo) - xs.begin();
    auto last = std::lower_bound(xs.begin(), xs.end(), r.omega.hi) - xs.begin();
    for (auto k = first; k < last; ++k) buckets[k].push_back(r.omega_prime);
  }
  std::vector<Slab> slabs;
  for (std::size_t k = 0; k < buckets.size(); ++k)
    if (!buckets[k].empty()) slabs.push_back({{xs[k], xs[k + 1]}, normalize_fibre(std::move(buckets[k]))});
  return from_slabs(std::move(slabs));
}

std::vector<Rect> RationalSet::rects() const {
  std::vector<Rect> out;
  for (const auto& slab : slabs_)
    for (const auto& iv : slab.fibre) out.push_back({slab.omega, iv});
  return out;
}

Rational RationalSet::measure() const {
  Rational total{0};
  for (const auto& slab : slabs_) total += slab.omega.length() * fibre_length(slab.fibre);
  return total;
}

PiecewiseConstant RationalSet::slice_profile() const {
  std::vector<PiecewiseConstant::Piece> pieces;
  Rational cursor{0};
  for (const auto& slab : slabs_) {
    if (cursor < slab.omega.lo) pieces.push_back({{cursor, slab.omega.lo}, kZero});
    pieces.push_back({slab.omega, fibre_length(slab.fibre)});
    cursor = slab.omega.hi;
  }
  if (cursor < kOne) pieces.push_back({{cursor, kOne}, kZero});
  return PiecewiseConstant::from_pieces(std::move(pieces));
}

bool RationalSet::is_vertical_strip() const {
  return std::all_of(slabs_.begin(), slabs_.end(), [](const Slab& s) {
    return s.fibre.size() == 1 && s.fibre[0].lo == kZero && s.fibre[0].hi == kOne;
  });
}

std::vector<Interval> RationalSet::omega_support() const {
  std::vector<Interval> out;
  for (const auto& slab : slabs_) {
    if (!out.empty() && out.back().hi == slab.omega.lo) out.back().hi = slab.omega.hi;
    else out.push_back(slab.omega);
  }
  return out;
}

bool RationalSet::contains(const Rational& omega, const Rational& omega_prime) const {
  for (const auto& slab : slabs_) {
    if (!slab.omega.contains(omega)) continue;
    for (const auto& iv : slab.fibre)
      if (iv.contains(omega_prime)) return true;
    return false;
  }
  return false;
}

RationalSet RationalSet::unite(const RationalSet& other) const { return combine(*this, other, fibre_union); }
RationalSet RationalSet::intersect(const RationalSet& other) const { return combine(*this, other, fibre_intersect); }
RationalSet RationalSet::minus(const RationalSet& other) const { return combine(*this, other, fibre_minus); }
RationalSet RationalSet::complement() const { return full().minus(*this); }
bool RationalSet::intersects(const RationalSet& other) const { return !intersect(other).empty(); }

// ---------------------------------------------------------------------------
// PiecewiseConstant

PiecewiseConstant::PiecewiseConstant() { pieces_.push_back({{kZero, kOne}, kZero}); }

PiecewiseConstant PiecewiseConstant::constant(const Rational& value) {
  PiecewiseConstant p;
  p.pieces_[0].value = value;
  return p;
}

PiecewiseConstant PiecewiseConstant::from_pieces(std::vector<Piece> pieces) {
  Rational cursor{0};
  PiecewiseConstant p;
  p.pieces_.clear();
  for (auto& piece : pieces) {
    if (piece.omega.lo != cursor || !(piece.omega.lo < piece.omega.hi))
      throw std::invalid_argument("piecewise-constant pieces must tile [0,1) in order");
    cursor = piece.omega.hi;
    if (!p.pieces_.empty() && p.pieces_.back().value == piece.value) p.pieces_.back().omega.hi = piece.omega.hi;
    else p.pieces_.push_back(std::move(piece));
  }
  if (cursor != kOne) throw std::invalid_argument("piecewise-constant pieces must tile [0,1) in order");
  return p;
}

PiecewiseConstant PiecewiseConstant::from_steps(const std::vector<Rational>& breaks,
                                                const std::vector<Rational>& values) {
  if (values.size() != breaks.size() + 1)
    throw std::invalid_argument("from_steps needs exactly one more value than breakpoints");
  std::vector<Piece> pieces;
  Rational cursor{0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    Rational next = i < breaks.size() ? breaks[i] : kOne;
    pieces.push_back({{cursor, next}, values[i]});
    cursor = next;
  }
  return from_pieces(std::move(pieces));
}

Rational PiecewiseConstant::value_at(const Rational& omega) const {
  for (const auto& p : pieces_)
    if (p.omega.contains(omega)) return p.value;
  throw std::out_of_range("omega " + to_string(omega) + " outside [0,1)");
}

Rational PiecewiseConstant::integral() const {
  Rational total{0};
  for (const auto& p : pieces_) total += p.omega.length() * p.value;
  return total;
}

Rational PiecewiseConstant::integral_over(std::span<const Interval> omegas) const {
  Rational total{0};
  for (const auto& iv : omegas)
    for (const auto& p : pieces_) {
      const Rational& lo = std::max(iv.lo, p.omega.lo);
      const Rational& hi = std::min(iv.hi, p.omega.hi);
      if (lo < hi) total += (hi - lo) * p.value;
    }
  return total;
}

std::vector<Rational> PiecewiseConstant::breakpoints() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].omega.lo);
  return out;
}

PiecewiseConstant PiecewiseConstant::scaled(const Rational& factor) const {
  std::vector<Piece> pieces = pieces_;
  for (auto& p : pieces) p.value *= factor;
  return from_pieces(std::move(pieces));
}

PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  std::vector<Rational> xs = a.breakpoints();
  auto bb = b.breakpoints();
  xs.insert(xs.end(), bb.begin(), bb.end());
  xs.push_back(kZero);
  xs.push_back(kOne);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<PiecewiseConstant::Piece> pieces;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    pieces.push_back({{xs[k], xs[k + 1]}, a.value_at(xs[k]) + b.value_at(xs[k])});
  return PiecewiseConstant::from_pieces(std::move(pieces));
}

// ---------------------------------------------------------------------------

DensityMismatch::DensityMismatch(Interval where, Rational expected, Rational actual)
    : std::invalid_argument("densities sum to " + to_string(actual) + " but the slice measure is " +
                            to_string(expected) + " on omega in [" + to_string(where.lo) + "," +
                            to_string(where.hi) + ")"),
      where_(std::move(where)),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

Rational measure(const RationalSet& s) { return s.measure(); }
PiecewiseConstant slice_profile(const RationalSet& s) { return s.slice_profile(); }

std::vector<Rect> canonicalize(std::span<const Rect> rects) { return RationalSet::from_rects(rects).rects(); }

std::vector<RationalSet> vertical_split(const RationalSet& s, std::span<const Rational> weights) {
  if (weights.empty()) throw std::invalid_argument("vertical_split needs at least one weight");
  Rational total{0};
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("vertical_split weight " + to_string(w) + " is negative");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("vertical_split weights sum to " + to_string(total) + ", not 1");

  std::vector<Rational> cumulative{kZero};
  for (const auto& w : weights) cumulative.push_back(cumulative.back() + w);

  std::vector<std::vector<RationalSet::Slab>> parts(weights.size());
  for (const auto& slab : s.slabs()) {
    std::vector<Fibre> fibres(weights.size());
    for (const auto& iv : slab.fibre) {
      const Rational len = iv.length();
      for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] > 0) fibres[i].push_back({iv.lo + len * cumulative[i], iv.lo + len * cumulative[i + 1]});
    }
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (!fibres[i].empty()) parts[i].push_back({slab.omega, normalize_fibre(std::move(fibres[i]))});
  }
  std::vector<RationalSet> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(RationalSet::from_slabs(std::move(p)));
  return out;
}

std::vector<RationalSet> density_split(const RationalSet& s, std::span<const PiecewiseConstant> densities) {
  if (densities.empty()) throw std::invalid_argument("density_split needs at least one density");
  std::vector<Rational> xs{kZero, kOne};
  for (const auto& slab : s.slabs()) {
    xs.push_back(slab.omega.lo);
    xs.push_back(slab.omega.hi);
  }
  for (const auto& d : densities) {
    for (const auto& p : d.pieces())
      if (p.value < 0) throw std::invalid_argument("density value " + to_string(p.value) + " is negative");
    auto b = d.breakpoints();
    xs.insert(xs.end(), b.begin(), b.end());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  // Walk each piece's density through the fibre, consuming omega'-length in order.
  std::vector<std::vector<RationalSet::Slab>> parts(densities.size());
  std::vector<std::size_t> cursor(densities.size(), 0);
  std::size_t is = 0;
  const Fibre empty;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    Interval cell{xs[k], xs[k + 1]};
    while (is < s.slabs().size() && s.slabs()[is].omega.hi <= cell.lo) ++is;
    const Fibre& fibre = (is < s.slabs().size() && s.slabs()[is].omega.lo <= cell.lo) ? s.slabs()[is].fibre : empty;
    const Rational slice = fibre_length(fibre);

    std::vector<Rational> want;
    Rational sum{0};
    for (std::size_t q = 0; q < densities.size(); ++q) {
      const auto& pieces = densities[q].pieces();
      while (pieces[cursor[q]].omega.hi <= cell.lo) ++cursor[q];
      want.push_back(pieces[cursor[q]].value);
      sum += want.back();
    }
    if (sum != slice) throw DensityMismatch(cell, slice, sum);

    std::size_t fi = 0;
    Rational pos = fibre.empty() ? kZero : fibre[0].lo;
    for (std::size_t q = 0; q < densities.size(); ++q) {
      Rational need = want[q];
      Fibre got;
      while (need > 0) {
        const Rational avail = fibre[fi].hi - pos;
        if (avail <= need) {
          got.push_back({pos, fibre[fi].hi});
          need -= avail;
          ++fi;
          if (fi < fibre.size()) pos = fibre[fi].lo;
        } else {
          got.push_back({pos, pos + need});
          pos += need;
          need = 0;
        }
      }
      if (!got.empty()) parts[q].push_back({cell, normalize_fibre(std::move(got))});
    }
  }
  std::vector<RationalSet> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(RationalSet::from_slabs(std::move(p)));
  return out;
}

}  // namespace belle
