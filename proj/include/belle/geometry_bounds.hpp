#pragma once

// Counting in the geometries of strictly minimal sets, the codimension bound
// k(delta), the lower bounds on epsilon for non-disintegrated geometries, the
// averaging step over a chain of closed sets, and an exhaustive search for the
// smallest Hausdorff gap at tiny scale.

#include "belle/finite_field.hpp"
#include "belle/rational_set.hpp"

#include <optional>
#include <string>
#include <vector>

namespace belle {

enum class GeometryKind { affine, projective, disintegrated };

struct GeometrySpec {
  GeometryKind kind = GeometryKind::affine;
  /// Field size; ignored for disintegrated geometries.
  unsigned q = 2;
  /// Tuple arity n.
  unsigned arity = 1;

  /// Throws std::invalid_argument unless q is a prime power (when needed) and arity >= 1.
  void validate() const;
};

GeometryKind parse_geometry_kind(const std::string& s);
std::string to_string(GeometryKind k);

/// Number of points of a closed set of dimension d: q^d, (q^{d+1}-1)/(q-1), or d.
BigInt closed_set_size(const GeometrySpec& g, long d);

/// |B|/|A| for closed B within A, dim A = d, dim(A/B) = k.
Rational closure_ratio(const GeometrySpec& g, long d, long k);

/// Smallest k such that dim(A/B) >= k forces |B| <= delta |A|; none for the
/// disintegrated geometry, where the ratio tends to 1.
/// Throws std::invalid_argument unless 0 < delta < 1.
std::optional<unsigned> min_k_for_delta(const GeometrySpec& g, const Rational& delta);

/// Checks |B| <= delta |A| for every d <= max_d and codimension in [k, d].
bool verify_k_for_delta(const GeometrySpec& g, const Rational& delta, unsigned k, unsigned max_d = 12);

/// 1/(2n), or 1/n for modular geometries. Throws std::invalid_argument if n < 1.
Rational epsilon_lower_bound(long n, bool modular);

/// A linear subspace of F_q^dim as a membership bitset over point codes.
struct Subspace {
  unsigned dimension = 0;
  std::vector<std::uint64_t> bits;

  bool contains(Point x) const { return (bits[x / 64] >> (x % 64)) & 1u; }
  std::size_t size() const;
  bool subset_of(const Subspace& other) const;
};

/// Every subspace of F_q^dim, by reduced row echelon forms.
std::vector<Subspace> enumerate_subspaces(unsigned q, unsigned dim);

struct ClosedSetChain {
  GeometrySpec geometry;
  /// Point sets Q_0 subset Q_1 subset ...; codes as in finite_field.hpp for
  /// affine/projective geometries, arbitrary labels for disintegrated ones.
  std::vector<std::vector<Point>> sets;

  /// Throws std::invalid_argument if a set is not closed or the chain is not increasing.
  void validate() const;
};

/// One cell of a finite probability table: alpha ranges over `cell`, and R(alpha) = closed.
struct TraceCell {
  RationalSet cell;
  std::vector<Point> closed;
};

struct AveragingWitness {
  std::size_t index = 0;
  Point b = 0;
  /// mu{alpha in C : b in R(alpha)}.
  Rational measure;
  /// (1/|Q_i|) sum_{b in Q_i} mu{alpha in C : b in R(alpha)}.
  Rational average;
};

/// The pigeonhole step: over the chain, the first (i, b) minimizing
/// mu{alpha in C : b in R(alpha)} with b in Q_i. Throws on an empty chain.
AveragingWitness averaging_witness(const ClosedSetChain& chain, const std::vector<TraceCell>& traces,
                                   const RationalSet& C);

class SearchTooLarge : public std::runtime_error {
 public:
  explicit SearchTooLarge(const std::string& count);
};

struct SearchResult {
  /// min over candidates of max(sum D1, sum D2) / grid^2.
  Rational gap;
  BigInt candidates;
  unsigned grid = 0;
  std::size_t group_order = 0;
  /// Group element index per cell, column-major: column c, row r at c*grid + r.
  std::vector<std::size_t> best;
  unsigned forward = 0;
  unsigned backward = 0;
};

/// Exhaustive search over automorphism-valued random endomorphisms constant on
/// the cells of a grid x grid partition, acting on F_q^dim. For each candidate
/// g, the gap is the exact Hausdorff distance between g(V-valued vertical
/// strips) and W-valued vertical strips, W = span(w_gens). Throws
/// SearchTooLarge beyond 10^7 candidates.
SearchResult exhaustive_pair_search(unsigned q, unsigned dim, unsigned grid, const std::vector<FqVector>& w_gens,
                                    unsigned jobs = 1);

/// The same search for Sym(size) acting on {0..size-1} with W = {0..w_size-1}.
SearchResult exhaustive_pure_search(unsigned size, unsigned w_size, unsigned grid, unsigned jobs = 1);

/// All elements of GL(dim, q) as permutation tables of the q^dim point codes.
std::vector<std::vector<Point>> general_linear_group(unsigned q, unsigned dim);

}  // namespace belle
