#include "shiftlab/systems.hpp"

#include "shiftlab/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace shiftlab {

const char* to_string(SystemKind kind) noexcept {
  switch (kind) {
    case SystemKind::Full: return "FULL";
    case SystemKind::Sft: return "SFT";
    case SystemKind::SGap: return "SGAP";
    case SystemKind::Beta: return "BETA";
    case SystemKind::Dyck: return "DYCK";
    case SystemKind::Coded: return "CODED";
    case SystemKind::SmallCenter: return "SMALLCENTER";
    case SystemKind::TwoErgodic: return "TWOERGODIC";
    case SystemKind::XPrime: return "XPRIME";
    case SystemKind::XDoublePrime: return "XDOUBLEPRIME";
  }
  return "UNKNOWN";
}

namespace {

bool symbols_below(std::span<const Symbol> w, std::size_t size) {
  return std::all_of(w.begin(), w.end(), [size](Symbol s) { return s < size; });
}

Word repeat(std::span<const Symbol> w, std::size_t copies) {
  Word out;
  out.reserve(w.size() * copies);
  for (std::size_t i = 0; i < copies; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

std::string word_list(const std::vector<Word>& ws) {
  std::string s;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (i) s += ",";
    s += format_word(ws[i]);
  }
  return s;
}

// Z-function of t: z[i] = lcp(t, t[i..]).
std::vector<std::size_t> z_function(const std::vector<Symbol>& t) {
  const std::size_t n = t.size();
  std::vector<std::size_t> z(n, 0);
  if (n == 0) return z;
  z[0] = n;
  for (std::size_t i = 1, l = 0, r = 0; i < n; ++i) {
    if (i < r) z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && t[z[i]] == t[i + z[i]]) ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
  }
  return z;
}

}  // namespace

// ---------------------------------------------------------------------------
// GapSet

GapSet::GapSet(std::vector<std::uint64_t> members, std::optional<Tail> tail)
    : explicit_(std::move(members)), tail_(tail) {
  std::sort(explicit_.begin(), explicit_.end());
  explicit_.erase(std::unique(explicit_.begin(), explicit_.end()), explicit_.end());
  if (tail_) {
    if (tail_->step == 0) throw Error(ErrorCode::InvalidInput, "gap tail step must be positive");
    for (auto n : explicit_) {
      if (n >= tail_->first && (n - tail_->first) % tail_->step == 0) {
        throw Error(ErrorCode::InvalidInput,
                    "explicit gap " + std::to_string(n) + " overlaps the tail");
      }
    }
  }
}

bool GapSet::contains(std::uint64_t n) const {
  if (std::binary_search(explicit_.begin(), explicit_.end(), n)) return true;
  return tail_ && n >= tail_->first && (n - tail_->first) % tail_->step == 0;
}

std::optional<std::uint64_t> GapSet::next_at_least(std::uint64_t n) const {
  std::optional<std::uint64_t> best;
  auto it = std::lower_bound(explicit_.begin(), explicit_.end(), n);
  if (it != explicit_.end()) best = *it;
  if (tail_) {
    std::uint64_t t = tail_->first;
    if (n > t) t += (n - t + tail_->step - 1) / tail_->step * tail_->step;
    if (!best || t < *best) best = t;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Substitution

Substitution Substitution::fibonacci() {
  Substitution s;
  s.rules[0] = {0, 1};
  s.rules[1] = {0};
  s.seed = 0;
  return s;
}

Word Substitution::prefix(std::size_t n) const {
  auto seed_rule = rules.find(seed);
  if (seed_rule == rules.end() || seed_rule->second.empty() || seed_rule->second[0] != seed ||
      seed_rule->second.size() < 2) {
    throw Error(ErrorCode::InvalidInput, "substitution must map the seed to seed.w, |w| >= 1");
  }
  Word w{seed};
  while (w.size() < n) {
    Word next;
    next.reserve(w.size() * 2);
    for (Symbol s : w) {
      auto it = rules.find(s);
      if (it == rules.end()) {
        throw Error(ErrorCode::InvalidInput, "substitution has no rule for " + std::to_string(s));
      }
      next.insert(next.end(), it->second.begin(), it->second.end());
      if (next.size() >= n) break;
    }
    w = std::move(next);
  }
  w.resize(n);
  return w;
}

// ---------------------------------------------------------------------------
// default periodic admissibility

bool ShiftSystem::contains_periodic(std::span<const Symbol> w) const {
  if (w.empty()) throw Error(ErrorCode::InvalidInput, "empty period");
  std::size_t copies = std::max<std::size_t>(3, (128 + w.size() - 1) / w.size() + 1);
  return contains(repeat(w, copies));
}

// ---------------------------------------------------------------------------
// FULL, SFT

FullShift::FullShift(std::size_t symbols) : symbols_(symbols) {
  if (symbols == 0) throw Error(ErrorCode::InvalidInput, "full shift needs a symbol");
}

bool FullShift::contains(std::span<const Symbol> w) const { return symbols_below(w, symbols_); }

std::string FullShift::describe() const { return "FULL(" + std::to_string(symbols_) + ")"; }

SftSystem::SftSystem(std::size_t symbols, std::vector<Word> forbidden)
    : symbols_(symbols), forbidden_(std::move(forbidden)) {
  if (symbols == 0) throw Error(ErrorCode::InvalidInput, "SFT needs a symbol");
  for (const auto& f : forbidden_) {
    if (f.empty()) throw Error(ErrorCode::InvalidInput, "empty forbidden word");
  }
}

bool SftSystem::contains(std::span<const Symbol> w) const {
  if (!symbols_below(w, symbols_)) return false;
  for (const auto& f : forbidden_) {
    if (std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end()) return false;
  }
  return true;
}

std::string SftSystem::describe() const {
  return "SFT(" + std::to_string(symbols_) + "; " + word_list(forbidden_) + ")";
}

// ---------------------------------------------------------------------------
// SGAP

SGapSystem::SGapSystem(GapSet gaps) : gaps_(std::move(gaps)) {}

bool SGapSystem::contains(std::span<const Symbol> w) const {
  if (!symbols_below(w, 2)) return false;
  std::optional<std::size_t> last_one;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 1) continue;
    if (last_one && !gaps_.contains(i - *last_one - 1)) return false;
    last_one = i;
  }
  return true;
}

bool SGapSystem::contains_periodic(std::span<const Symbol> w) const {
  if (w.empty()) throw Error(ErrorCode::InvalidInput, "empty period");
  if (!symbols_below(w, 2)) return false;
  std::vector<std::size_t> ones;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 1) ones.push_back(i);
  }
  if (ones.empty()) return true;  // 0^inf
  for (std::size_t j = 0; j < ones.size(); ++j) {
    std::size_t next = j + 1 < ones.size() ? ones[j + 1] : ones[0] + w.size();
    if (!gaps_.contains(next - ones[j] - 1)) return false;
  }
  return true;
}

std::string SGapSystem::describe() const {
  std::ostringstream os;
  os << "SGAP({";
  for (std::size_t i = 0; i < gaps_.explicit_members().size(); ++i) {
    if (i) os << ",";
    os << gaps_.explicit_members()[i];
  }
  os << "}";
  if (gaps_.tail()) os << " + " << gaps_.tail()->first << "+" << gaps_.tail()->step << "N";
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// BETA

BetaSystem::BetaSystem(BetaNumber beta, std::size_t digits) : beta_(std::move(beta)) {
  BetaExpansion e = beta_expand_partial(beta_, digits);
  if (e.digits.empty()) {
    throw Error(ErrorCode::PrecisionExhausted, "no digit of d_beta could be certified");
  }
  hat_ = beta_hat(e);
  top_digit_ = hat_.digit(1);
}

BetaSystem::BetaSystem(BetaNumber beta, BetaHat hat) : beta_(std::move(beta)), hat_(std::move(hat)) {
  top_digit_ = hat_.digit(1);
}

Symbol BetaSystem::hat_digit(std::size_t i) const { return hat_.digit(i); }

bool BetaSystem::contains(std::span<const Symbol> w) const {
  const std::size_t n = w.size();
  if (n == 0) return true;
  if (!symbols_below(w, static_cast<std::size_t>(top_digit_) + 1)) return false;
  const std::size_t m = std::min(n, hat_.known());
  std::vector<Symbol> t;
  t.reserve(m + 1 + n);
  for (std::size_t i = 1; i <= m; ++i) t.push_back(hat_.digit(i));
  t.push_back(std::numeric_limits<Symbol>::max());
  t.insert(t.end(), w.begin(), w.end());
  auto z = z_function(t);
  bool undecided = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = n - i;
    const std::size_t lcp = std::min(z[m + 1 + i], len);
    if (lcp == len) continue;  // suffix equals the prefix of d-hat
    if (lcp == m) {            // ran past the known digits
      undecided = true;
      continue;
    }
    if (w[i + lcp] > t[lcp]) return false;
  }
  if (undecided) {
    throw Error(ErrorCode::Undecided, "word longer than the known prefix of d-hat");
  }
  return true;
}

std::string BetaSystem::describe() const { return "BETA(" + beta_.describe() + ")"; }

// ---------------------------------------------------------------------------
// DYCK

namespace {

bool is_opener(Symbol s) { return s == kDyckOpenSquare || s == kDyckOpenRound; }
Symbol match_of(Symbol closer) {
  return closer == kDyckCloseSquare ? kDyckOpenSquare : kDyckOpenRound;
}

}  // namespace

DyckReduction dyck_reduce(std::span<const Symbol> w) {
  DyckReduction r;
  for (Symbol s : w) {
    if (s > kDyckCloseRound) throw Error(ErrorCode::InvalidInput, "symbol outside Dyck alphabet");
    if (is_opener(s)) {
      r.openers.push_back(s);
    } else if (r.openers.empty()) {
      r.closers.push_back(s);
    } else if (r.openers.back() == match_of(s)) {
      r.openers.pop_back();
    } else {
      return DyckReduction{true, {}, {}};
    }
  }
  return r;
}

std::string format_reduction(const DyckReduction& r) {
  if (r.zero) return "0";
  if (r.is_one()) return "1";
  Word all = r.closers;
  all.insert(all.end(), r.openers.begin(), r.openers.end());
  return format_word(all, Codec::Dyck);
}

bool DyckSystem::contains(std::span<const Symbol> w) const {
  if (!symbols_below(w, 4)) return false;
  return !dyck_reduce(w).zero;
}

bool DyckSystem::contains_periodic(std::span<const Symbol> w) const {
  if (w.empty()) throw Error(ErrorCode::InvalidInput, "empty period");
  if (!symbols_below(w, 4)) return false;
  return !dyck_reduce(repeat(w, 2)).zero;
}

const char* to_string(DyckClass c) noexcept {
  switch (c) {
    case DyckClass::KPrime: return "KPRIME";
    case DyckClass::KDoublePrime: return "KDOUBLEPRIME";
    case DyckClass::Both: return "BOTH";
    case DyckClass::Neither: return "NEITHER";
  }
  return "UNKNOWN";
}

DyckClass dyck_classify(const Point& p) {
  if (!p.is_periodic()) throw Error(ErrorCode::InvalidInput, "classification needs a periodic point");
  Word w = p.period();
  DyckReduction r = dyck_reduce(w);
  if (r.zero) throw Error(ErrorCode::NotInSystem, "period reduces to 0");
  if (dyck_reduce(repeat(w, 2)).zero) {
    throw Error(ErrorCode::NotInSystem, "period is admissible but its square reduces to 0");
  }
  if (r.is_one()) return DyckClass::Both;
  if (r.closers.empty()) return DyckClass::KPrime;
  if (r.openers.empty()) return DyckClass::KDoublePrime;
  return DyckClass::Neither;
}

// ---------------------------------------------------------------------------
// CODED (finite graph)

CodedSystem::CodedSystem(FiniteGraphData graph) : graph_(std::move(graph)) {
  if (graph_.vertices == 0) throw Error(ErrorCode::InvalidInput, "graph has no vertices");
  if (graph_.root >= graph_.vertices) throw Error(ErrorCode::InvalidInput, "root out of range");
  for (const auto& e : graph_.edges) {
    if (e.from >= graph_.vertices || e.to >= graph_.vertices) {
      throw Error(ErrorCode::InvalidInput, "edge endpoint out of range");
    }
    symbols_ = std::max<std::size_t>(symbols_, static_cast<std::size_t>(e.label) + 1);
  }
}

bool CodedSystem::contains(std::span<const Symbol> w) const {
  std::vector<char> cur(graph_.vertices, 1);
  for (Symbol s : w) {
    std::vector<char> next(graph_.vertices, 0);
    bool any = false;
    for (const auto& e : graph_.edges) {
      if (cur[e.from] && e.label == s) {
        next[e.to] = 1;
        any = true;
      }
    }
    if (!any) return false;
    cur = std::move(next);
  }
  return true;
}

std::string CodedSystem::describe() const {
  return "CODED(" + std::to_string(graph_.vertices) + " vertices, " +
         std::to_string(graph_.edges.size()) + " edges)";
}

// ---------------------------------------------------------------------------
// SMALLCENTER

SmallCenterSystem::SmallCenterSystem(SystemPtr base) : base_(std::move(base)) {
  if (!base_) throw Error(ErrorCode::InvalidInput, "missing base system");
  auto size = base_->alphabet_size();
  if (!size) throw Error(ErrorCode::InvalidInput, "base system needs a finite alphabet");
  added_ = static_cast<Symbol>(*size);
}

bool SmallCenterSystem::contains(std::span<const Symbol> w) const {
  const std::size_t n = w.size();
  if (!symbols_below(w, static_cast<std::size_t>(added_) + 1)) return false;
  // r-free stretches must lie in the base language
  for (std::size_t i = 0; i < n;) {
    if (w[i] == added_) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && w[j] != added_) ++j;
    if (!base_->contains(w.subspan(i, j - i))) return false;
    i = j;
  }
  // windows with 2^(k-1) < |u| <= 2^k carry at most k copies of r; the
  // longest window in each range dominates the shorter ones
  std::vector<std::size_t> count(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) count[i + 1] = count[i] + (w[i] == added_ ? 1 : 0);
  for (std::size_t k = 1; k < 64 && (std::size_t{1} << (k - 1)) < n; ++k) {
    const std::size_t len = std::min<std::size_t>(std::size_t{1} << k, n);
    for (std::size_t i = 0; i + len <= n; ++i) {
      if (count[i + len] - count[i] > k) return false;
    }
  }
  return true;
}

bool SmallCenterSystem::contains_bruteforce(std::span<const Symbol> w) const {
  const std::size_t n = w.size();
  if (!symbols_below(w, static_cast<std::size_t>(added_) + 1)) return false;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (w[j - 1] == added_) ++c;
      const std::size_t len = j - i;
      if (c == 0) {
        if (!base_->contains(w.subspan(i, len))) return false;
        continue;
      }
      if (len == 1) continue;
      std::size_t k = 0;
      while ((std::size_t{1} << k) < len) ++k;  // 2^(k-1) < len <= 2^k
      if (c >= k + 1) return false;
    }
  }
  return true;
}

std::size_t SmallCenterSystem::glue_bound(std::span<const Symbol> u,
                                          std::span<const Symbol> v) const {
  std::size_t c = static_cast<std::size_t>(std::count(u.begin(), u.end(), added_) +
                                           std::count(v.begin(), v.end(), added_));
  if (c + 2 >= 63) return std::numeric_limits<std::size_t>::max();
  return std::size_t{1} << (c + 2);
}

std::optional<std::size_t> SmallCenterSystem::glue(std::span<const Symbol> u,
                                                   std::span<const Symbol> v,
                                                   std::size_t limit) const {
  Word w(u.begin(), u.end());
  const std::size_t base = w.size();
  for (std::size_t n = 0; n <= limit; ++n) {
    w.resize(base);
    w.insert(w.end(), n, Symbol{0});
    w.push_back(added_);
    w.insert(w.end(), v.begin(), v.end());
    if (contains(w)) return n;
  }
  return std::nullopt;
}

std::string SmallCenterSystem::describe() const {
  return "SMALLCENTER(" + base_->describe() + " + " + std::to_string(added_) + ")";
}

// ---------------------------------------------------------------------------
// TWOERGODIC

namespace {

std::string as_chars(std::span<const Symbol> w) {
  std::string s(w.size(), '\0');
  for (std::size_t i = 0; i < w.size(); ++i) s[i] = static_cast<char>('a' + (w[i] & 0x3f));
  return s;
}

}  // namespace

TwoErgodicSystem::TwoErgodicSystem(Substitution y) : y_(std::move(y)) {
  for (const auto& [s, img] : y_.rules) {
    if (s > 1) throw Error(ErrorCode::InvalidInput, "Y must be binary");
    for (Symbol t : img) {
      if (t > 1) throw Error(ErrorCode::InvalidInput, "Y must be binary");
    }
  }
  Word p = y_.prefix(1 << 14);
  std::size_t longest = 0;
  for (std::size_t i = 0, run = 0; i < p.size(); ++i) {
    run = p[i] == 0 ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  if (longest + 1 >= p.size()) throw Error(ErrorCode::InvalidInput, "Y must not be 0^inf");
  k_ = longest + 1;
  y_text_ = as_chars(p);
}

std::string_view TwoErgodicSystem::y_text(std::size_t n, std::string& scratch) const {
  const std::size_t need = 8 * n + 64;
  if (need <= y_text_.size()) return std::string_view(y_text_).substr(0, need);
  scratch = as_chars(y_.prefix(need));
  return scratch;
}

bool TwoErgodicSystem::in_y(std::span<const Symbol> w) const {
  if (w.empty()) return true;
  if (!symbols_below(w, 2)) return false;
  std::string scratch;
  return y_text(w.size(), scratch).find(as_chars(w)) != std::string::npos;
}

namespace {

// Rules (1)-(4) on every factor of w, filled by increasing length.
class AllowedTable {
 public:
  AllowedTable(std::string_view y_text, std::size_t k, std::span<const Symbol> w)
      : w_(w), n_(w.size()), k_(k) {
    ones_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) ones_[i + 1] = ones_[i] + (w[i] == 1 ? 1 : 0);
    // yend[i]: largest j with w[i..j) in L(Y); non-decreasing in i
    const std::string text = as_chars(w);
    yend_.assign(n_, 0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      j = std::max(j, i);
      while (j < n_ && y_text.find(std::string_view(text).substr(i, j + 1 - i)) != std::string_view::npos) ++j;
      yend_[i] = j;
    }
    table_.assign((n_ + 1) * (n_ + 1), 0);
  }

  // Returns false as soon as some factor is not allowed (when stop_early).
  bool fill(bool stop_early) {
    bool all = true;
    for (std::size_t len = 1; len <= n_; ++len) {
      for (std::size_t i = 0; i + len <= n_; ++i) {
        bool ok = decide(i, i + len);
        at(i, i + len) = ok;
        if (!ok) {
          all = false;
          if (stop_early) return false;
        }
      }
    }
    return all;
  }

  bool whole() const { return n_ == 0 ? true : at(0, n_); }

 private:
  char& at(std::size_t i, std::size_t j) { return table_[i * (n_ + 1) + j]; }
  char at(std::size_t i, std::size_t j) const { return table_[i * (n_ + 1) + j]; }

  bool decide(std::size_t i, std::size_t j) {
    const std::size_t len = j - i;
    const std::size_t ones = ones_[j] - ones_[i];
    if (ones == 0) return true;                  // (1)
    if (yend_[i] >= j) return true;              // (2)
    if (w_[i] == 0 && at(i + 1, j)) return true;  // (3)
    if (w_[j - 1] == 0 && at(i, j - 1)) return true;
    if (ones < 63 && (std::size_t{1} << ones) <= len) {  // (4), 2^ones <= k+|v|+|w|
      for (std::size_t a = i + 1; a + k_ < j; ++a) {
        if (ones_[a + k_] - ones_[a] != 0) continue;
        if (at(i, a) && at(a + k_, j)) return true;
      }
    }
    return false;
  }

  std::span<const Symbol> w_;
  std::size_t n_;
  std::size_t k_ = 0;
  std::vector<std::size_t> ones_;
  std::vector<std::size_t> yend_;
  std::vector<char> table_;
};

}  // namespace

bool TwoErgodicSystem::allowed(std::span<const Symbol> w) const {
  if (w.empty()) return false;
  if (!symbols_below(w, 2)) return false;
  std::string scratch;
  AllowedTable t(y_text(w.size(), scratch), k_, w);
  t.fill(false);
  return t.whole();
}

bool TwoErgodicSystem::contains(std::span<const Symbol> w) const {
  if (w.empty()) return true;
  if (!symbols_below(w, 2)) return false;
  std::string scratch;
  AllowedTable t(y_text(w.size(), scratch), k_, w);
  return t.fill(true);
}

Word TwoErgodicSystem::glue(std::span<const Symbol> v, std::span<const Symbol> w) const {
  std::size_t ones = static_cast<std::size_t>(std::count(v.begin(), v.end(), Symbol{1}) +
                                              std::count(w.begin(), w.end(), Symbol{1}));
  if (ones >= 63) throw Error(ErrorCode::LimitExceeded, "too many 1s to glue");
  std::size_t need = std::size_t{1} << ones;
  std::size_t have = v.size() + w.size();
  std::size_t k = std::max(k_, need > have ? need - have : 0);
  Word out(v.begin(), v.end());
  out.insert(out.end(), k, Symbol{0});
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

std::string TwoErgodicSystem::describe() const {
  return "TWOERGODIC(K=" + std::to_string(k_) + ")";
}

// ---------------------------------------------------------------------------
// XPRIME

XPrimeSystem::XPrimeSystem(Substitution omega) : omega_(std::move(omega)) {
  for (const auto& [s, img] : omega_.rules) {
    if (s > 1) throw Error(ErrorCode::InvalidInput, "omega must be binary");
    for (Symbol t : img) {
      if (t > 1) throw Error(ErrorCode::InvalidInput, "omega must be binary");
    }
  }
  omega_prefix_ = omega_.prefix(1 << 14);
  omega_text_ = as_chars(omega_prefix_);
}

bool XPrimeSystem::contains(std::span<const Symbol> w) const {
  const std::size_t n = w.size();
  if (!symbols_below(w, 3)) return false;
  Word long_om;
  std::string long_oms;
  const bool cached = 8 * n + 64 <= omega_prefix_.size();
  if (!cached) {
    long_om = omega_.prefix(8 * n + 64);
    long_oms = as_chars(long_om);
  }
  const Word& om = cached ? omega_prefix_ : long_om;
  std::string_view oms = cached ? std::string_view(omega_text_).substr(0, 8 * n + 64) : std::string_view(long_oms);
  for (std::size_t a = 0; a < n;) {
    if (w[a] == 2) {
      ++a;
      continue;
    }
    std::size_t b = a;
    while (b < n && w[b] != 2) ++b;
    const std::size_t len = b - a;
    std::size_t r = 0;
    while (b + r < n && w[b + r] == 2) ++r;
    const bool run_complete = b < n && b + r < n;
    std::span<const Symbol> s = w.subspan(a, len);
    if (a == 0) {
      if (!run_complete) {
        if (oms.find(as_chars(s)) == std::string_view::npos) return false;
      } else {
        // s = omega_{k-len+1..k} with len <= k <= r
        bool found = false;
        for (std::size_t k = len; k <= r && !found; ++k) {
          found = std::equal(s.begin(), s.end(), om.begin() + static_cast<std::ptrdiff_t>(k - len));
        }
        if (!found) return false;
      }
    } else {
      // a block starts here: s is a prefix of omega
      if (!std::equal(s.begin(), s.end(), om.begin())) return false;
      if (run_complete && r < len) return false;
    }
    a = b;
  }
  return true;
}

// ---------------------------------------------------------------------------
// XDOUBLEPRIME

bool XDoublePrimeSystem::contains(std::span<const Symbol> w) const {
  if (!symbols_below(w, 2)) return false;
  std::vector<std::pair<Symbol, std::size_t>> runs;
  for (Symbol s : w) {
    if (!runs.empty() && runs.back().first == s) {
      ++runs.back().second;
    } else {
      runs.emplace_back(s, 1);
    }
  }
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    if (runs[i].first != 0) continue;
    const std::size_t z = runs[i].second;
    const std::size_t o = runs[i + 1].second;
    const bool left = i > 0;
    const bool right = i + 2 < runs.size();
    if (left && right && z != o) return false;
    if (left && !right && o > z) return false;
    if (!left && right && z > o) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// factories

SystemPtr make_full_shift(std::size_t symbols) { return std::make_shared<FullShift>(symbols); }

SystemPtr make_sft(std::size_t symbols, std::vector<Word> forbidden) {
  return std::make_shared<SftSystem>(symbols, std::move(forbidden));
}

SystemPtr make_golden_mean() { return make_sft(2, {Word{1, 1}}); }

SystemPtr make_sgap(GapSet gaps) { return std::make_shared<SGapSystem>(std::move(gaps)); }

SystemPtr make_beta(BetaNumber beta, std::size_t digits) {
  return std::make_shared<BetaSystem>(std::move(beta), digits);
}

SystemPtr make_dyck() { return std::make_shared<DyckSystem>(); }

SystemPtr make_coded(FiniteGraphData graph) {
  return std::make_shared<CodedSystem>(std::move(graph));
}

SystemPtr make_small_center(SystemPtr base) {
  return std::make_shared<SmallCenterSystem>(std::move(base));
}

SystemPtr make_two_ergodic(Substitution y) {
  return std::make_shared<TwoErgodicSystem>(std::move(y));
}

SystemPtr make_counterexample(CounterexampleKind kind, Substitution omega) {
  if (kind == CounterexampleKind::XPrime) return std::make_shared<XPrimeSystem>(std::move(omega));
  return std::make_shared<XDoublePrimeSystem>();
}

}  // namespace shiftlab
