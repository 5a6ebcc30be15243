#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace shiftlab {

using Rational = mpq_class;
using BigInt = mpz_class;

/// p/q in lowest terms (mpq_class(p, q) alone is not canonicalized).
inline Rational frac(const BigInt& p, const BigInt& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// 2^-k as an exact rational.
Rational dyadic(std::uint64_t k);

/// Parses "p/q", "p" or a finite decimal such as "0.125".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/// floor(r) as a big integer.
BigInt floor(const Rational& r);

BigInt ceil(const Rational& r);

}  // namespace shiftlab
