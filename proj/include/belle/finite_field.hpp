#pragma once

// Arithmetic in GF(q) for prime powers q <= 256, and finitely supported
// vectors over GF(q).
//
// Vectors are coded as natural numbers: coordinate i is the i-th base-q digit
// (field elements are themselves coded 0..q-1). This is a bijection between
// N and the countable space F_q^(N), so the window [0, q^d) is exactly the
// subspace spanned by e_0, ..., e_{d-1}.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace belle {

using Point = std::uint64_t;

class FiniteField {
 public:
  /// Shared immutable instance. Throws std::invalid_argument unless q is a
  /// prime power in [2, 256].
  static std::shared_ptr<const FiniteField> get(unsigned q);

  unsigned order() const { return q_; }
  unsigned characteristic() const { return p_; }

  unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
  unsigned sub(unsigned a, unsigned b) const { return add_[a * q_ + neg_[b]]; }
  unsigned neg(unsigned a) const { return neg_[a]; }
  unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }
  /// Throws std::domain_error on zero.
  unsigned inv(unsigned a) const;

  explicit FiniteField(unsigned q);

 private:
  unsigned q_;
  unsigned p_;
  std::vector<unsigned> add_;
  std::vector<unsigned> mul_;
  std::vector<unsigned> neg_;
  std::vector<unsigned> inv_;
};

bool is_prime_power(unsigned q);

struct FqVector {
  unsigned q = 2;
  /// Dense coordinates; trailing zeros trimmed, so equal vectors compare equal.
  std::vector<unsigned> coords;

  static FqVector zero(unsigned q) { return FqVector{q, {}}; }
  static FqVector basis(unsigned q, std::size_t index);
  static FqVector from_coords(unsigned q, std::vector<unsigned> coords);
  static FqVector from_code(unsigned q, Point code);
  /// Throws std::overflow_error if the code does not fit 64 bits.
  Point code() const;

  bool is_zero() const { return coords.empty(); }
  unsigned at(std::size_t i) const { return i < coords.size() ? coords[i] : 0u; }
  void trim();

  friend bool operator==(const FqVector&, const FqVector&) = default;
};

FqVector operator+(const FqVector& a, const FqVector& b);
FqVector operator-(const FqVector& a, const FqVector& b);
FqVector scale(unsigned c, const FqVector& v);

/// Incrementally maintained reduced echelon basis that remembers, for every
/// row, its expression in terms of the vectors inserted so far.
class EchelonBasis {
 public:
  explicit EchelonBasis(unsigned q);

  /// Adds v; returns false (and leaves the basis unchanged) if v is in the span.
  bool insert(const FqVector& v);
  bool contains(const FqVector& v) const;
  /// Coefficients c with sum c[i] * inserted[i] == v, or nullopt.
  std::optional<std::vector<unsigned>> express(const FqVector& v) const;
  std::size_t rank() const { return rows_.size(); }
  /// The vectors accepted by insert, in order.
  const std::vector<FqVector>& inserted() const { return inserted_; }

 private:
  struct Row {
    std::size_t pivot;
    std::vector<unsigned> coords;
    std::vector<unsigned> combination;
  };
  // Reduces coords against the rows, accumulating the combination used.
  void reduce(std::vector<unsigned>& coords, std::vector<unsigned>& combination) const;

  unsigned q_;
  std::shared_ptr<const FiniteField> field_;
  std::vector<Row> rows_;
  std::vector<FqVector> inserted_;
};

std::size_t rank(unsigned q, const std::vector<FqVector>& vectors);

/// Index of the first vector lying in the span of its predecessors, if any.
std::optional<std::size_t> first_dependent(unsigned q, const std::vector<FqVector>& vectors);

/// True iff v lies in span(gens). Throws std::invalid_argument on mixed q.
bool subspace_membership(const FqVector& v, const std::vector<FqVector>& gens);

/// Every vector of span(gens), as codes, sorted. Exhaustive enumeration.
std::vector<Point> enumerate_span(unsigned q, const std::vector<FqVector>& gens);

}  // namespace belle
