#pragma once

// Greedy beta-expansions of 1, the Parry-normalized d-hat and the Parry order.

#include "shiftlab/rational.hpp"
#include "shiftlab/seqcore.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace shiftlab {

/// beta as the unique root of `poly` (ascending integer coefficients, minimal
/// polynomial) in the isolating interval (lo, hi). Floors are certified by
/// bisection; exact zero tests use arithmetic in Q[t]/(poly).
struct AlgebraicBeta {
  std::vector<BigInt> poly;
  Rational lo;
  Rational hi;
  std::size_t max_refinements = 4096;
};

/// beta known only to lie in [lo, hi]; no refinement is available.
struct IntervalBeta {
  Rational lo;
  Rational hi;
};

class BetaNumber {
 public:
  using Repr = std::variant<Rational, AlgebraicBeta, IntervalBeta>;

  static BetaNumber rational(Rational beta);
  static BetaNumber algebraic(std::vector<BigInt> poly, Rational lo, Rational hi);
  /// `decimal` +- 10^-precision.
  static BetaNumber decimal(const std::string& decimal, unsigned precision);
  static BetaNumber golden_ratio();

  const Repr& repr() const noexcept { return repr_; }
  bool is_rational() const noexcept { return std::holds_alternative<Rational>(repr_); }
  /// A rational lower bound on beta.
  Rational lower() const;
  std::string describe() const;

 private:
  explicit BetaNumber(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

struct BetaExpansion {
  Word digits;                            // d_1 .. d_n
  std::optional<std::size_t> finite_at;   // least j with x_j = 0, certified
  std::optional<Point> exact;             // d_beta when finite or eventually periodic
  bool exhausted = false;                 // precision ran out before n digits (partial only)
};

/// First n greedy digits of the expansion of 1. Throws PRECISION_EXHAUSTED
/// when a floor cannot be certified.
BetaExpansion beta_expand(const BetaNumber& beta, std::size_t n);

/// As beta_expand, but stops at the first undecidable floor and reports it.
BetaExpansion beta_expand_partial(const BetaNumber& beta, std::size_t n);

struct BetaHat {
  std::optional<Point> point;  // exact d-hat when known
  Word prefix;                 // known leading digits

  bool truncated() const noexcept { return !point.has_value(); }
  std::size_t known() const noexcept;  // SIZE_MAX when exact
  /// d-hat_i, 1-based; throws UNDECIDED past a truncated prefix.
  Symbol digit(std::size_t i) const;
};

BetaHat beta_hat(const BetaExpansion& d);

/// User-supplied digits d_1..d_n; `finite` means d_beta = d_1..d_n 0^inf.
BetaHat beta_hat(const Word& digits, bool finite);

/// sigma^k(x) <= x for all k >= 1.
bool parry_valid(const Point& x);
/// Same condition on what is known: every suffix of a truncated prefix is <=
/// the equal-length prefix.
bool parry_valid(const BetaHat& h);

}  // namespace shiftlab
