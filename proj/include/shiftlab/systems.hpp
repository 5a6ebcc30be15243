#pragma once

// Language-membership oracles for the shift spaces used by the workbench.

#include "shiftlab/beta.hpp"
#include "shiftlab/seqcore.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shiftlab {

enum class SystemKind {
  Full,
  Sft,
  SGap,
  Beta,
  Dyck,
  Coded,
  SmallCenter,
  TwoErgodic,
  XPrime,
  XDoublePrime,
};

const char* to_string(SystemKind kind) noexcept;

/// S as an explicit finite set plus an optional arithmetic-progression tail.
class GapSet {
 public:
  struct Tail {
    std::uint64_t first = 0;
    std::uint64_t step = 1;
  };

  GapSet() = default;
  GapSet(std::vector<std::uint64_t> members, std::optional<Tail> tail = std::nullopt);

  bool contains(std::uint64_t n) const;
  bool infinite() const noexcept { return tail_.has_value(); }
  bool empty() const noexcept { return explicit_.empty() && !tail_; }

  /// Smallest member >= n.
  std::optional<std::uint64_t> next_at_least(std::uint64_t n) const;

  const std::vector<std::uint64_t>& explicit_members() const noexcept { return explicit_; }
  const std::optional<Tail>& tail() const noexcept { return tail_; }

 private:
  std::vector<std::uint64_t> explicit_;
  std::optional<Tail> tail_;
};

/// Substitution on a finite alphabet, iterated from `seed` to a fixed point.
struct Substitution {
  std::map<Symbol, Word> rules;
  Symbol seed = 0;

  static Substitution fibonacci();  // 0 -> 01, 1 -> 0

  /// First n symbols of the fixed point starting with `seed`.
  Word prefix(std::size_t n) const;
};

/// Finite labelled graph as plain data (edges are (from, to, label)).
struct FiniteGraphData {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Symbol label = 0;
  };
  std::size_t vertices = 0;
  std::size_t root = 0;
  std::vector<Edge> edges;
};

class ShiftSystem {
 public:
  virtual ~ShiftSystem() = default;

  virtual SystemKind kind() const noexcept = 0;
  /// nullopt for a countable alphabet.
  virtual std::optional<std::size_t> alphabet_size() const noexcept = 0;
  /// w in L(X). BETA may throw UNDECIDED when its expansion is truncated.
  virtual bool contains(std::span<const Symbol> w) const = 0;
  virtual Codec codec() const noexcept { return Codec::Numeric; }
  virtual std::string describe() const = 0;

  /// Admissibility of the periodic point w^inf.
  virtual bool contains_periodic(std::span<const Symbol> w) const;
};

using SystemPtr = std::shared_ptr<const ShiftSystem>;

class FullShift final : public ShiftSystem {
 public:
  explicit FullShift(std::size_t symbols);
  SystemKind kind() const noexcept override { return SystemKind::Full; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return symbols_; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override;

 private:
  std::size_t symbols_;
};

class SftSystem final : public ShiftSystem {
 public:
  SftSystem(std::size_t symbols, std::vector<Word> forbidden);
  SystemKind kind() const noexcept override { return SystemKind::Sft; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return symbols_; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override;
  const std::vector<Word>& forbidden() const noexcept { return forbidden_; }

 private:
  std::size_t symbols_;
  std::vector<Word> forbidden_;
};

class SGapSystem final : public ShiftSystem {
 public:
  explicit SGapSystem(GapSet gaps);
  SystemKind kind() const noexcept override { return SystemKind::SGap; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return 2; }
  bool contains(std::span<const Symbol> w) const override;
  bool contains_periodic(std::span<const Symbol> w) const override;
  std::string describe() const override;
  const GapSet& gaps() const noexcept { return gaps_; }

 private:
  GapSet gaps_;
};

class BetaSystem final : public ShiftSystem {
 public:
  explicit BetaSystem(BetaNumber beta, std::size_t digits = 256);
  BetaSystem(BetaNumber beta, BetaHat hat);
  SystemKind kind() const noexcept override { return SystemKind::Beta; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return top_digit_ + 1; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override;

  const BetaNumber& beta() const noexcept { return beta_; }
  const BetaHat& hat() const noexcept { return hat_; }
  /// d-hat_{i} (1-based); UNDECIDED past a truncated prefix.
  Symbol hat_digit(std::size_t i) const;

 private:
  BetaNumber beta_;
  BetaHat hat_;
  Symbol top_digit_ = 0;
};

class DyckSystem final : public ShiftSystem {
 public:
  SystemKind kind() const noexcept override { return SystemKind::Dyck; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return 4; }
  bool contains(std::span<const Symbol> w) const override;
  bool contains_periodic(std::span<const Symbol> w) const override;
  Codec codec() const noexcept override { return Codec::Dyck; }
  std::string describe() const override { return "DYCK"; }
};

/// Language of all labels of paths in a finite labelled graph.
class CodedSystem final : public ShiftSystem {
 public:
  explicit CodedSystem(FiniteGraphData graph);
  SystemKind kind() const noexcept override { return SystemKind::Coded; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return symbols_; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override;
  const FiniteGraphData& graph() const noexcept { return graph_; }

 private:
  FiniteGraphData graph_;
  std::size_t symbols_ = 0;
};

/// Extension of a base system X over A_r by the symbol r, rare in long windows.
class SmallCenterSystem final : public ShiftSystem {
 public:
  explicit SmallCenterSystem(SystemPtr base);
  SystemKind kind() const noexcept override { return SystemKind::SmallCenter; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return added_ + 1; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override;

  Symbol added_symbol() const noexcept { return added_; }
  const SystemPtr& base() const noexcept { return base_; }

  /// Direct O(n^2) window scan, kept as an independent oracle for tests.
  bool contains_bruteforce(std::span<const Symbol> w) const;

  /// Least n <= limit with u 0^n r v admissible.
  std::optional<std::size_t> glue(std::span<const Symbol> u, std::span<const Symbol> v,
                                  std::size_t limit) const;
  /// Search bound for glue: 2^(c(u)+c(v)+2), c = occurrences of r. For bases
  /// closed under appending 0, 2^(c(u)+c(v)) - 1 zeros already suffice.
  std::size_t glue_bound(std::span<const Symbol> u, std::span<const Symbol> v) const;

 private:
  SystemPtr base_;
  Symbol added_;
};

/// Two minimal subsystems (0^inf and Y) glued by long zero blocks.
class TwoErgodicSystem final : public ShiftSystem {
 public:
  explicit TwoErgodicSystem(Substitution y = Substitution::fibonacci());
  SystemKind kind() const noexcept override { return SystemKind::TwoErgodic; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return 2; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override;

  std::size_t zero_threshold() const noexcept { return k_; }
  bool in_y(std::span<const Symbol> w) const;
  /// Rules (1)-(4) applied to w itself (not to its factors).
  bool allowed(std::span<const Symbol> w) const;
  /// v 0^k w with the least k >= K meeting the log-count condition.
  Word glue(std::span<const Symbol> v, std::span<const Symbol> w) const;

 private:
  // Y prefix long enough for words of length n
  std::string_view y_text(std::size_t n, std::string& scratch) const;

  Substitution y_;
  std::size_t k_ = 0;
  std::string y_text_;
};

/// Coded system of blocks "2" and omega_1..omega_k 2^k.
class XPrimeSystem final : public ShiftSystem {
 public:
  explicit XPrimeSystem(Substitution omega = Substitution::fibonacci());
  SystemKind kind() const noexcept override { return SystemKind::XPrime; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return 3; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override { return "XPRIME"; }
  const Substitution& omega() const noexcept { return omega_; }

 private:
  Substitution omega_;
  Word omega_prefix_;
  std::string omega_text_;
};

/// Coded system of blocks 0^k 1^k, closed up by 0^inf and 1^inf.
class XDoublePrimeSystem final : public ShiftSystem {
 public:
  SystemKind kind() const noexcept override { return SystemKind::XDoublePrime; }
  std::optional<std::size_t> alphabet_size() const noexcept override { return 2; }
  bool contains(std::span<const Symbol> w) const override;
  std::string describe() const override { return "XDOUBLEPRIME"; }
};

SystemPtr make_full_shift(std::size_t symbols);
SystemPtr make_sft(std::size_t symbols, std::vector<Word> forbidden);
SystemPtr make_golden_mean();
SystemPtr make_sgap(GapSet gaps);
SystemPtr make_beta(BetaNumber beta, std::size_t digits = 256);
SystemPtr make_dyck();
SystemPtr make_coded(FiniteGraphData graph);
SystemPtr make_small_center(SystemPtr base);
SystemPtr make_two_ergodic(Substitution y = Substitution::fibonacci());

enum class CounterexampleKind { XPrime, XDoublePrime };
SystemPtr make_counterexample(CounterexampleKind kind,
                              Substitution omega = Substitution::fibonacci());

// Dyck reduction.

/// red(w): either the absorbing zero, or unmatched closers followed by
/// unmatched openers (both empty means the identity).
struct DyckReduction {
  bool zero = false;
  Word closers;
  Word openers;
  bool is_one() const noexcept { return !zero && closers.empty() && openers.empty(); }
};

DyckReduction dyck_reduce(std::span<const Symbol> w);
std::string format_reduction(const DyckReduction& r);

enum class DyckClass { KPrime, KDoublePrime, Both, Neither };
const char* to_string(DyckClass c) noexcept;

/// Classifies a purely periodic Dyck point by the reduction of its period.
DyckClass dyck_classify(const Point& p);

}  // namespace shiftlab
