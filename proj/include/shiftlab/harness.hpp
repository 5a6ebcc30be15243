#pragma once

// Experiments, JSON documents and versioned CSV output.

#include "shiftlab/graphview.hpp"
#include "shiftlab/orbitlab.hpp"
#include "shiftlab/simplexmetrics.hpp"
#include "shiftlab/systems.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace shiftlab {

using json = nlohmann::json;

// the one generator used by every experiment
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "std::mt19937_64";
inline constexpr int kCsvSchemaVersion = 1;

// ---------------------------------------------------------------------------
// documents

SystemPtr system_from_json(const json& doc);
BetaNumber beta_from_json(const json& doc);
/// "3/2", "1.5", "golden" / "phi"; decimals are taken as exact rationals.
BetaNumber parse_beta(const std::string& text);

/// [{point, mass}, ...]; Dyck points are recognised by their braces.
FinMeasure measure_from_json(const json& doc);
/// [{weight, point}, ...]
Combo combo_from_json(const json& doc);
Point point_from_text(const std::string& text);

json to_json(const ClosingCertificate& c, Codec codec = Codec::Numeric);
json to_json(const LinkCertificate& c, Codec codec = Codec::Numeric);
json to_json(const ApproxResult& r, Codec codec = Codec::Numeric);

// ---------------------------------------------------------------------------
// CSV

class CsvTable {
 public:
  CsvTable(std::string experiment, std::uint64_t seed, std::vector<std::string> columns);

  void add(std::vector<std::string> row);
  /// Trailing comment lines, after the rows.
  void note(std::string line) { notes_.push_back(std::move(line)); }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::string experiment_;
  std::uint64_t seed_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> notes_;
};

std::string fixed(double v, int digits = 6);

// ---------------------------------------------------------------------------
// experiments

struct ExperimentConfig {
  std::string experiment;
  json system;
  std::size_t max_period = 16;
  std::size_t horizon = 100000;
  std::size_t trials = 50;
  std::size_t n_max = 60;
  std::uint64_t seed = 0;
  std::string out;

  static ExperimentConfig from_json(const json& doc);
  /// LIMIT_EXCEEDED past the documented guards.
  void validate() const;
};

inline constexpr std::size_t kMaxTrials = 10000;
inline constexpr std::size_t kMaxHorizon = std::size_t{1} << 22;
inline constexpr std::size_t kMaxPeriodXDoublePrime = 16;
inline constexpr std::size_t kMaxPeriodDyck = 14;

struct DensityRow {
  std::size_t trial = 0;
  Combo combo;
  Rational eps;
  Rational distance;
  std::size_t period = 0;
  std::size_t links = 0;
  unsigned tightening = 1;
  bool brute_checked = false;
};

struct DensityOptions {
  std::vector<Rational> eps;  // empty: 2^-3, 2^-4, 2^-5
  std::size_t loop_length = 6;
  std::size_t max_parts = 4;
};

/// Random convex combinations of root-loop CO-measures, each approximated at
/// every eps. Rows come out sorted by (trial, eps).
std::vector<DensityRow> run_density(const ShiftSystem& system, std::size_t trials, std::uint64_t seed,
                                    const DensityOptions& opts = {});
CsvTable density_table(const std::vector<DensityRow>& rows, std::uint64_t seed, Codec codec);

struct ObstructionReport {
  FinMeasure target = FinMeasure::dirac(Point::constant(0));
  std::size_t period_bound = 0;
  Rational min_distance;
  Point argmin = Point::constant(0);
  std::size_t candidates = 0;  // admissible primitive periods up to the bound
};

/// One report per period bound 1..max_period (nested runs), each the minimum
/// of dbar(gamma(w^inf), target) over admissible primitive w with |w| <= bound.
std::vector<ObstructionReport> run_obstruction(const ShiftSystem& system, const FinMeasure& target,
                                               std::size_t max_period);
CsvTable obstruction_table(const std::vector<ObstructionReport>& reps, std::uint64_t seed, Codec codec);

struct EntropyRun {
  EntropyCounts counts;
  std::vector<std::optional<bool>> recurrence;  // n >= 4 only
  double ln_phi_gap = 0;                        // |(1/N) ln r_N - ln phi|
};

inline constexpr std::size_t kMaxEntropySteps = 200;

EntropyRun run_entropy(std::size_t n_max);
CsvTable entropy_table(const EntropyRun& run, std::uint64_t seed);

/// Wraps generic_prefix (one target list) or oscillation_prefix.
CsvTable run_generic(const ShiftSystem& system, const std::vector<Combo>& targets, std::size_t L,
                     bool oscillate, std::uint64_t seed, const GenericOptions& opts = {});

}  // namespace shiftlab
