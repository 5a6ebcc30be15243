#pragma once

// Closing orbit segments, linking periodic orbits, convex approximation by a
// single periodic orbit and finite-horizon generic points.

#include "shiftlab/graphview.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/seqcore.hpp"
#include "shiftlab/simplexmetrics.hpp"
#include "shiftlab/systems.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace shiftlab {

/// a(eps): least m with 2^-(m+1) < eps. Agreement on a(eps) symbols puts two
/// points within eps of each other.
std::size_t seam_margin(const Rational& eps);

/// An orbit segment source: a whole point or a finite prefix.
using Source = std::variant<Point, Word>;

struct ClosingCertificate {
  Source x;
  Rational epsilon;
  std::size_t N = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  Point y = Point::constant(0);
  std::string strategy;
};

struct ClosingOptions {
  // a purely periodic admissible x closes itself
  bool reuse_periodic = true;
  // longest block searched when x is a whole point
  std::size_t max_length = std::size_t{1} << 16;
};

ClosingCertificate close_orbit(const ShiftSystem& system, const Source& x, const Rational& eps,
                               std::size_t N, const ClosingOptions& opts = {});

struct CheckResult {
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
  std::string summary() const;
};

/// The definitional inequalities, re-derived from x and y alone.
CheckResult check_closing(const ShiftSystem& system, const ClosingCertificate& cert);

/// Closes a word readable in a finite graph by the shortest path back to its
/// starting vertex; the start is chosen to make that path shortest.
Point sft_close(const LabelledGraph& g, std::span<const Symbol> w);

/// Presentation with a distinguished root for root-coded systems (SGAP, BETA,
/// CODED); INVALID_INPUT otherwise.
GraphPtr root_graph(const ShiftSystem& system);

/// Shortest power of the period of y that labels a loop at the root.
Word root_loop(const LabelledGraph& g, const Point& y);

struct LinkCertificate {
  Point y1 = Point::constant(0);
  Point y2 = Point::constant(0);
  Rational lambda;
  Rational epsilon;
  std::size_t p1 = 0, p2 = 0, q1 = 0, q2 = 0;
  std::size_t a = 0, b = 0;  // repetitions of the two loop words
  std::size_t divisor = 1;
  Point z = Point::constant(0);
  bool degenerate = false;
};

struct LinkOptions {
  std::size_t divisor = 1;
  std::size_t a_max = 0;  // 0: derived from eps, |w1| and the divisor
};

LinkCertificate link(const ShiftSystem& system, const Point& y1, const Point& y2, const Rational& lambda,
                     const Rational& eps, const LinkOptions& opts = {});

CheckResult check_link(const ShiftSystem& system, const LinkCertificate& cert);

using Combo = std::vector<std::pair<Rational, Point>>;

/// sum lambda_i gamma(p_i)
FinMeasure combo_measure(const Combo& parts);

struct ApproxStage {
  LinkCertificate link;
  Rational tolerance;
  Rational distance;  // to the normalized partial combination
};

struct ApproxResult {
  Point z = Point::constant(0);
  std::vector<ApproxStage> trace;
  Rational distance;
  unsigned tightening = 1;  // 1, 3 or 9
};

/// Chained pairwise links with tolerances eps / 2^(j+1); retried with all
/// tolerances divided by 3 and then 9 if the final distance misses eps.
ApproxResult approx_convex(const ShiftSystem& system, const Combo& parts, const Rational& eps);

struct Checkpoint {
  std::size_t n = 0;
  Rational lo, hi;
  std::size_t stage = 0;
  std::size_t target = 0;
};

struct GenericStage {
  std::size_t n = 0;
  std::size_t target = 0;
  std::size_t M = 0;       // period of the approximant x_n
  BigInt N;                // divisor for p1, p2
  std::size_t p1 = 0, q1 = 0, p2 = 0, q2 = 0;
  Rational approx_distance;
};

struct GenericReport {
  Word prefix;  // L + depth symbols, so every checkpoint has its windows
  std::vector<GenericStage> stages;
  std::vector<Checkpoint> checkpoints;
  std::size_t last_stage = 0;
  std::size_t certified = 0;  // prefix symbols shared with the limit point
};

struct GenericOptions {
  Rational eps0 = Rational(1, 4);
  std::size_t depth = kDefaultTruncation;
  std::size_t min_checkpoint = 64;
  std::size_t max_word = std::size_t{1} << 24;
};

/// targets[n] is the combination for mu_n (the last one repeats forever).
GenericReport generic_prefix(const ShiftSystem& system, const std::vector<Combo>& targets, std::size_t L,
                             const GenericOptions& opts = {});

struct OscillationReport {
  GenericReport generic;
  std::vector<Rational> min_hi;  // per target: min over checkpoints of the upper bound
};

OscillationReport oscillation_prefix(const ShiftSystem& system, const std::vector<Combo>& V, std::size_t L,
                                     const GenericOptions& opts = {});

}  // namespace shiftlab
