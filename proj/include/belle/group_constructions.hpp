#pragma once

// Permutation groups with approximators, and the combinators that preserve
// approximability: direct products, wreath products, finite-index supergroups.
//
// Carriers are coded in N. The direct product M u N puts the left point a at
// 2a and the right point b at 2b + 1. The wreath carrier N x M puts (b, a) at
// the Cantor code (b + a)(b + a + 1)/2 + a.

#include "belle/pair_model.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace belle {

/// How an approximation spent its epsilon.
struct Budget {
  std::string label;
  Rational allocated;
  /// The bound actually certified, <= allocated.
  Rational certified;
  std::vector<Budget> parts;
  /// Budget left unassigned (the wreath series tail).
  Rational residual;
};

struct Approximation {
  RandomEndo result;
  Rational bound;
  Budget budget;
};

class NoCosetFactorization : public std::runtime_error {
 public:
  NoCosetFactorization(std::size_t cell, const std::string& value);
  std::size_t cell() const { return cell_; }

 private:
  std::size_t cell_;
};

/// A cell value outside the group's approximable family.
class NotInPresentation : public std::invalid_argument {
 public:
  NotInPresentation(const std::string& group, const std::string& value);
};

class PermGroupPresentation {
 public:
  virtual ~PermGroupPresentation() = default;

  virtual std::string describe() const = 0;
  /// Domain of the cell values: fq for vector spaces, natural for coded carriers.
  virtual Domain domain() const = 0;
  /// The window points on which approximations are certified.
  virtual std::vector<Point> alphabet() const = 0;
  /// Whether v belongs to the approximable family, checked on the alphabet.
  virtual bool contains(const WindowInjection& v) const = 0;
  /// An automorphism-valued random endomorphism within eps of h on every
  /// vertical-strip probe over the alphabet. Throws NotInPresentation.
  virtual Approximation approximate(const RandomEndo& h, const Rational& eps) const = 0;
  /// A non-trivial random endomorphism for demonstrations.
  virtual RandomEndo demo_endo() const = 0;
};

using Presentation = std::shared_ptr<const PermGroupPresentation>;

/// Sym(N) on the pure set, certified on [0, window).
Presentation pure_set(Point window);
/// The trivial group on a singleton.
Presentation trivial_group();
/// GL(F_q^(N)) on F_q^dim; only automorphism-valued inputs are accepted.
Presentation fq_vectors(unsigned q, unsigned dim);
/// Budget eps/2 per factor.
Presentation direct_product(Presentation G, Presentation H);
/// G the fibre group, H the top group, m materialized coordinates. Budget
/// eps/2 to H, 2^{-i-2} eps to coordinate b_i, residual 2^{-m-1} eps.
/// Throws std::invalid_argument if m <= 0 or [0, m) is not in H's alphabet.
Presentation wreath_product(Presentation G, Presentation H, long m);
/// The group generated by H and the coset representatives; each cell value
/// v factors as g_j h with the lowest such j.
/// Throws std::invalid_argument unless the representatives are bijective on the alphabet.
Presentation finite_index_supergroup(Presentation H, std::vector<WindowInjection> coset_reps);

// --- carrier codes and rules --------------------------------------------------

Point product_code(bool right, Point x);
std::pair<bool, Point> product_decode(Point code);
Point pair_code(Point b, Point a);
std::pair<Point, Point> pair_decode(Point code);

/// (g, h) acting on the coded disjoint union.
WindowInjection product_endo(WindowInjection left, WindowInjection right);
/// The components of v if it preserves the two halves on the given alphabets.
std::optional<std::pair<WindowInjection, WindowInjection>> product_components(const WindowInjection& v,
                                                                             const std::vector<Point>& left_alphabet,
                                                                             const std::vector<Point>& right_alphabet,
                                                                             Domain left_domain, Domain right_domain);

/// The left (right = false) or right half of v, as an injection of `domain`.
WindowInjection product_component(WindowInjection v, bool right, Domain domain);

/// (h, g) with (b, a) -> (h b, g_b a); coordinates not listed are the identity of `fibre`.
WindowInjection wreath_endo(WindowInjection top, std::map<Point, WindowInjection> coords, Domain fibre);

struct WreathParts {
  WindowInjection top;
  std::map<Point, WindowInjection> coords;
  Domain fibre;
  WindowInjection coordinate(Point b) const;
};
std::optional<WreathParts> wreath_parts(const WindowInjection& v);

/// Residue classes {x = residue mod modulus}.
struct Block {
  Point modulus;
  Point residue;
};
/// m_k t + r_k -> m_{perm[k]} t + r_{perm[k]}. Throws std::invalid_argument
/// unless the blocks partition N and perm is a permutation.
WindowInjection block_permutation(std::vector<Block> blocks, std::vector<std::size_t> perm);
/// Evens <-> odds.
WindowInjection swap_blocks();
/// 2t -> 4t+1 -> 4t+3 -> 2t.
WindowInjection rotate_blocks();

/// Named coset representatives: id, swap, rot3, rot3^2.
WindowInjection named_coset_rep(const std::string& name);

/// worst_case_distance(a.result, h, P.alphabet()).
Rational measured_distance(const PermGroupPresentation& P, const RandomEndo& h, const Approximation& a);

/// Prefix expressions: pure | trivial | fq(q=Q,d=D) | product(E,E) | wreath(E,E,m=K)
/// | findex(E,reps=[r,...]). Throws std::invalid_argument with the offset on bad input.
Presentation parse_presentation(const std::string& expr, Point window);

}  // namespace belle
