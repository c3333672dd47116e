#pragma once

// Exact rationals backed by GMP. Every measure, distance and bound in the
// library is a Rational; nothing is ever rounded to floating point.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace belle {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Builds num/den in lowest terms. Throws std::invalid_argument on den == 0.
Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// Always "p/q" (including "0/1" and "3/1") so the text round-trips.
std::string to_string(const Rational& r);

Rational pow_rational(const Rational& base, unsigned exponent);

/// Smallest integer >= r.
BigInt ceil(const Rational& r);

struct RationalHash {
  std::size_t operator()(const Rational& r) const;
};

}  // namespace belle
