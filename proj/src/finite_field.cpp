#include "belle/finite_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace belle {

namespace {

bool prime_power_parts(unsigned q, unsigned& p, unsigned& k) {
  if (q < 2) return false;
  p = 0;
  for (unsigned d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  k = 0;
  unsigned r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  return r == 1;
}

// Polynomials over GF(p) of degree < k are coded base p, like vector codes.
std::vector<unsigned> digits(unsigned x, unsigned p, unsigned k) {
  std::vector<unsigned> d(k);
  for (unsigned i = 0; i < k; ++i) {
    d[i] = x % p;
    x /= p;
  }
  return d;
}

unsigned undigits(const std::vector<unsigned>& d, unsigned p) {
  unsigned x = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) x = x * p + *it;
  return x;
}

// Multiplies two residues modulo the monic polynomial with low coefficients `modulus`.
unsigned poly_mulmod(unsigned a, unsigned b, unsigned p, unsigned k, const std::vector<unsigned>& modulus) {
  auto da = digits(a, p, k), db = digits(b, p, k);
  std::vector<unsigned> prod(2 * k, 0);
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  for (unsigned deg = 2 * k - 1; deg >= k; --deg) {
    unsigned c = prod[deg];
    if (c == 0) continue;
    prod[deg] = 0;
    // x^k == -(modulus low part)
    for (unsigned i = 0; i < k; ++i) prod[deg - k + i] = (prod[deg - k + i] + (p - modulus[i]) * c) % p;
  }
  prod.resize(k);
  return undigits(prod, p);
}

bool is_irreducible(const std::vector<unsigned>& modulus, unsigned p, unsigned k) {
  // A monic degree-k polynomial is irreducible iff the residue ring has no zero divisors.
  unsigned q = 1;
  for (unsigned i = 0; i < k; ++i) q *= p;
  for (unsigned a = 1; a < q; ++a)
    for (unsigned b = a; b < q; ++b)
      if (poly_mulmod(a, b, p, k, modulus) == 0) return false;
  return true;
}

}  // namespace

bool is_prime_power(unsigned q) {
  unsigned p, k;
  return prime_power_parts(q, p, k);
}

FiniteField::FiniteField(unsigned q) : q_(q) {
  unsigned k;
  if (q > 256 || !prime_power_parts(q, p_, k))
    throw std::invalid_argument("field order " + std::to_string(q) + " is not a prime power in [2,256]");
  add_.resize(q * q);
  mul_.resize(q * q);
  neg_.resize(q);
  inv_.assign(q, 0);
  std::vector<unsigned> modulus(k, 0);
  if (k > 1) {
    bool found = false;
    for (unsigned low = 0; low < q && !found; ++low) {
      modulus = digits(low, p_, k);
      found = is_irreducible(modulus, p_, k);
    }
    if (!found) throw std::logic_error("no irreducible polynomial found");
  }
  for (unsigned a = 0; a < q; ++a) {
    auto da = digits(a, p_, k);
    std::vector<unsigned> dn(k);
    for (unsigned i = 0; i < k; ++i) dn[i] = (p_ - da[i]) % p_;
    neg_[a] = undigits(dn, p_);
    for (unsigned b = 0; b < q; ++b) {
      auto db = digits(b, p_, k);
      std::vector<unsigned> ds(k);
      for (unsigned i = 0; i < k; ++i) ds[i] = (da[i] + db[i]) % p_;
      add_[a * q + b] = undigits(ds, p_);
      mul_[a * q + b] = k == 1 ? (a * b) % p_ : poly_mulmod(a, b, p_, k, modulus);
    }
  }
  for (unsigned a = 1; a < q; ++a)
    for (unsigned b = 1; b < q; ++b)
      if (mul_[a * q + b] == 1) inv_[a] = b;
}

std::shared_ptr<const FiniteField> FiniteField::get(unsigned q) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto field = std::make_shared<const FiniteField>(q);
  cache.emplace(q, field);
  return field;
}

unsigned FiniteField::inv(unsigned a) const {
  if (a == 0) throw std::domain_error("zero has no inverse");
  return inv_[a];
}

// ---------------------------------------------------------------------------

void FqVector::trim() {
  while (!coords.empty() && coords.back() == 0) coords.pop_back();
}

FqVector FqVector::basis(unsigned q, std::size_t index) {
  FqVector v{q, std::vector<unsigned>(index + 1, 0)};
  v.coords[index] = 1;
  return v;
}

FqVector FqVector::from_coords(unsigned q, std::vector<unsigned> coords) {
  for (auto c : coords)
    if (c >= q) throw std::invalid_argument("coordinate " + std::to_string(c) + " is not an element of GF(" +
                                            std::to_string(q) + ")");
  FqVector v{q, std::move(coords)};
  v.trim();
  return v;
}

FqVector FqVector::from_code(unsigned q, Point code) {
  FqVector v{q, {}};
  while (code != 0) {
    v.coords.push_back(static_cast<unsigned>(code % q));
    code /= q;
  }
  return v;
}

Point FqVector::code() const {
  Point x = 0;
  for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
    if (x > (UINT64_MAX - *it) / q) throw std::overflow_error("vector code exceeds 64 bits");
    x = x * q + *it;
  }
  return x;
}

namespace {

void check_same_field(const FqVector& a, const FqVector& b) {
  if (a.q != b.q)
    throw std::invalid_argument("vectors over GF(" + std::to_string(a.q) + ") and GF(" + std::to_string(b.q) +
                                ") cannot be combined");
}

}  // namespace

FqVector operator+(const FqVector& a, const FqVector& b) {
  check_same_field(a, b);
  auto field = FiniteField::get(a.q);
  FqVector r{a.q, std::vector<unsigned>(std::max(a.coords.size(), b.coords.size()), 0)};
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = field->add(a.at(i), b.at(i));
  r.trim();
  return r;
}

FqVector operator-(const FqVector& a, const FqVector& b) {
  check_same_field(a, b);
  auto field = FiniteField::get(a.q);
  FqVector r{a.q, std::vector<unsigned>(std::max(a.coords.size(), b.coords.size()), 0)};
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = field->sub(a.at(i), b.at(i));
  r.trim();
  return r;
}

FqVector scale(unsigned c, const FqVector& v) {
  auto field = FiniteField::get(v.q);
  FqVector r = v;
  for (auto& x : r.coords) x = field->mul(c, x);
  r.trim();
  return r;
}

// ---------------------------------------------------------------------------

EchelonBasis::EchelonBasis(unsigned q) : q_(q), field_(FiniteField::get(q)) {}

void EchelonBasis::reduce(std::vector<unsigned>& coords, std::vector<unsigned>& combination) const {
  for (const auto& row : rows_) {
    if (row.pivot >= coords.size() || coords[row.pivot] == 0) continue;
    const unsigned c = coords[row.pivot];
    if (coords.size() < row.coords.size()) coords.resize(row.coords.size(), 0);
    for (std::size_t i = 0; i < row.coords.size(); ++i)
      coords[i] = field_->sub(coords[i], field_->mul(c, row.coords[i]));
    for (std::size_t i = 0; i < row.combination.size(); ++i)
      combination[i] = field_->sub(combination[i], field_->mul(c, row.combination[i]));
  }
}

bool EchelonBasis::insert(const FqVector& v) {
  if (v.q != q_) throw std::invalid_argument("vector field does not match the basis field");
  std::vector<unsigned> coords = v.coords;
  std::vector<unsigned> combination(inserted_.size() + 1, 0);
  combination.back() = 1;
  reduce(coords, combination);
  auto nz = std::find_if(coords.begin(), coords.end(), [](unsigned c) { return c != 0; });
  if (nz == coords.end()) return false;
  const std::size_t pivot = static_cast<std::size_t>(nz - coords.begin());
  const unsigned inv = field_->inv(coords[pivot]);
  for (auto& c : coords) c = field_->mul(inv, c);
  for (auto& c : combination) c = field_->mul(inv, c);
  // Keep the basis fully reduced so every pivot column is clear in other rows.
  for (auto& row : rows_) {
    row.combination.resize(combination.size(), 0);
    if (pivot >= row.coords.size() || row.coords[pivot] == 0) continue;
    const unsigned c = row.coords[pivot];
    if (row.coords.size() < coords.size()) row.coords.resize(coords.size(), 0);
    for (std::size_t i = 0; i < coords.size(); ++i) row.coords[i] = field_->sub(row.coords[i], field_->mul(c, coords[i]));
    for (std::size_t i = 0; i < combination.size(); ++i)
      row.combination[i] = field_->sub(row.combination[i], field_->mul(c, combination[i]));
  }
  rows_.push_back({pivot, std::move(coords), std::move(combination)});
  inserted_.push_back(v);
  return true;
}

bool EchelonBasis::contains(const FqVector& v) const { return express(v).has_value(); }

std::optional<std::vector<unsigned>> EchelonBasis::express(const FqVector& v) const {
  if (v.q != q_) throw std::invalid_argument("vector field does not match the basis field");
  std::vector<unsigned> coords = v.coords;
  std::vector<unsigned> combination(inserted_.size(), 0);
  // reduce() subtracts; track the negated combination and flip at the end.
  reduce(coords, combination);
  if (std::any_of(coords.begin(), coords.end(), [](unsigned c) { return c != 0; })) return std::nullopt;
  for (auto& c : combination) c = field_->neg(c);
  return combination;
}

std::size_t rank(unsigned q, const std::vector<FqVector>& vectors) {
  EchelonBasis basis(q);
  for (const auto& v : vectors) basis.insert(v);
  return basis.rank();
}

std::optional<std::size_t> first_dependent(unsigned q, const std::vector<FqVector>& vectors) {
  EchelonBasis basis(q);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    if (!basis.insert(vectors[i])) return i;
  return std::nullopt;
}

bool subspace_membership(const FqVector& v, const std::vector<FqVector>& gens) {
  for (const auto& g : gens)
    if (g.q != v.q) throw std::invalid_argument("generator field does not match the vector field");
  if (v.is_zero()) return true;
  EchelonBasis basis(v.q);
  for (const auto& g : gens) basis.insert(g);
  return basis.contains(v);
}

std::vector<Point> enumerate_span(unsigned q, const std::vector<FqVector>& gens) {
  std::vector<Point> out{0};
  for (const auto& g : gens) {
    if (g.q != q) throw std::invalid_argument("generator field does not match");
    std::vector<Point> next;
    for (Point base : out) {
      const FqVector b = FqVector::from_code(q, base);
      for (unsigned c = 0; c < q; ++c) next.push_back((b + scale(c, g)).code());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out = std::move(next);
  }
  return out;
}

}  // namespace belle
