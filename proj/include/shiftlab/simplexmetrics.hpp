#pragma once

// Finitely supported measures on the shift and the distance d-bar between them.

#include "shiftlab/rational.hpp"
#include "shiftlab/seqcore.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace shiftlab {

/// depth 0 is EXACT; depth m > 0 is TRUNCATED(m), where atoms are the first m
/// symbols of their points.
struct MeasureMode {
  std::size_t depth = 0;

  static MeasureMode exact() { return {0}; }
  static MeasureMode truncated(std::size_t m) { return {m}; }
  bool is_exact() const noexcept { return depth == 0; }
  std::string describe() const;
  friend bool operator==(const MeasureMode&, const MeasureMode&) = default;
};

inline constexpr std::size_t kDefaultTruncation = 12;

struct MeasureAtom {
  std::optional<Point> point;  // EXACT
  Word word;                   // TRUNCATED(m)
  Rational mass;

  /// 1-based symbol; TRUNCATED atoms are defined up to their depth only.
  Symbol at(std::size_t i) const { return point ? point->at(i) : word[i - 1]; }
};

class FinMeasure {
 public:
  /// Merges repeated points; masses must be positive and sum to exactly 1.
  static FinMeasure exact(std::vector<std::pair<Point, Rational>> atoms);
  static FinMeasure truncated(std::size_t m, std::vector<std::pair<Word, Rational>> atoms);
  static FinMeasure dirac(const Point& x);

  const MeasureMode& mode() const noexcept { return mode_; }
  const std::vector<MeasureAtom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  Rational mass_of(const Point& x) const;
  Rational mass_of(std::span<const Symbol> word) const;

  /// EXACT -> TRUNCATED(m) by taking first-m-symbol images.
  FinMeasure truncate(std::size_t m) const;
  std::string describe(Codec codec = Codec::Numeric) const;

  friend bool operator==(const FinMeasure& a, const FinMeasure& b);

 private:
  FinMeasure() = default;

  MeasureMode mode_;
  std::vector<MeasureAtom> atoms_;
};

/// Emp(x, n): mass 1/n on each of sigma^j(x), j < n.
FinMeasure empirical(const Point& x, std::size_t n, MeasureMode mode = MeasureMode::exact());
/// Emp of a finite prefix, TRUNCATED(m) only; needs |x| >= n + m.
FinMeasure empirical(std::span<const Symbol> x, std::size_t n, std::size_t m);
/// gamma(p) for a purely periodic point.
FinMeasure co_measure(const Point& p, MeasureMode mode = MeasureMode::exact());
/// gamma((w)^inf) from a period word; a non-primitive w is rejected.
FinMeasure co_measure_word(const Word& w);
FinMeasure convex(const std::vector<std::pair<Rational, FinMeasure>>& parts);

struct DistanceResult {
  Rational value;  // max(forward, backward)
  Rational lo;
  Rational hi;     // lo + 2^-m in TRUNCATED(m), equal to lo in EXACT
  Rational forward;
  Rational backward;
  bool forward_attained = false;
  bool backward_attained = false;
};

DistanceResult dbar(const FinMeasure& mu, const FinMeasure& nu);

/// inf over bands of max(t, D) with D found by enumerating every subset of
/// supp mu, both directions. Independent of dbar; supports up to 24 atoms.
inline constexpr std::size_t kBruteforceSupport = 24;
Rational dbar_bruteforce(const FinMeasure& mu, const FinMeasure& nu);

/// 1 - maxflow of the site-level network at radius 2^-k (k = 0: equality):
/// source -> mu-atoms -> nu-atoms within distance, nu-atoms -> sink.
Rational band_deficiency_flow(const FinMeasure& mu, const FinMeasure& nu, std::size_t k);

/// The closed form sum over cylinders of (mu_c - nu_c)^+ at a radius 2^-k,
/// i.e. agreement on the first k-1 symbols (k = 0 means equality).
Rational cylinder_deficiency(const FinMeasure& mu, const FinMeasure& nu, std::size_t k);

struct AuxInstance {
  std::size_t k = 0;
  std::size_t m = 1;
  std::size_t n = 1;
  Point x = Point::constant(0);
  FinMeasure mu1 = FinMeasure::dirac(Point::constant(0));
  FinMeasure mu2 = FinMeasure::dirac(Point::constant(0));
  FinMeasure nu1 = FinMeasure::dirac(Point::constant(0));
  FinMeasure nu2 = FinMeasure::dirac(Point::constant(0));
  Rational alpha = 0;
  Rational beta = 0;
};

struct AuxItem {
  Rational lhs;
  Rational rhs;
  Rational margin;  // rhs - lhs
  bool holds = false;
  bool applicable = true;
};

struct AuxReport {
  AuxItem item[4];
  bool all_hold() const noexcept;
};

/// Both sides of the four empirical-measure inequalities on one instance.
AuxReport check_aux(const AuxInstance& in);

}  // namespace shiftlab
