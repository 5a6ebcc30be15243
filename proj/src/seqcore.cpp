#include "shiftlab/seqcore.hpp"

#include "shiftlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <numeric>

namespace shiftlab {

namespace {

std::size_t hash_word(std::span<const Symbol> w) {
  // FNV-1a over the symbol values
  std::size_t h = 1469598103934665603ull;
  for (Symbol s : w) {
    h ^= s;
    h *= 1099511628211ull;
  }
  return h ^ w.size();
}

}  // namespace

PrimitiveRoot primitive_root(std::span<const Symbol> w) {
  const std::size_t n = w.size();
  if (n == 0) throw Error(ErrorCode::InvalidInput, "primitive_root of empty word");
  std::vector<std::size_t> fail(n, 0);
  for (std::size_t i = 1, k = 0; i < n; ++i) {
    while (k > 0 && w[i] != w[k]) k = fail[k - 1];
    if (w[i] == w[k]) ++k;
    fail[i] = k;
  }
  std::size_t p = n - fail[n - 1];
  if (n % p != 0) p = n;
  return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p)), n / p};
}

std::size_t least_rotation(std::span<const Symbol> w) {
  // Booth's algorithm on the doubled word.
  const std::size_t n = w.size();
  if (n == 0) return 0;
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Symbol sj = w[j % n];
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != w[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < w[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != w[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < w[(k + static_cast<std::size_t>(i) + 1) % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

Order lex_compare(std::span<const Symbol> a, std::span<const Symbol> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return Order::Less;
    if (a[i] > b[i]) return Order::Greater;
  }
  if (a.size() == b.size()) return Order::Equal;
  return a.size() < b.size() ? Order::Less : Order::Greater;
}

EventuallyPeriodicSeq::EventuallyPeriodicSeq(Word preperiod, Word period) {
  if (period.empty()) throw Error(ErrorCode::InvalidInput, "empty period");
  Word root = primitive_root(period).root;
  const std::size_t n = root.size();
  // Pop preperiod symbols that the period can absorb; each pop rotates the
  // period right by one.
  std::size_t rot = 0;  // root rotated right by `rot`
  while (!preperiod.empty() && preperiod.back() == root[(2 * n - 1 - rot % n) % n]) {
    preperiod.pop_back();
    ++rot;
  }
  rot %= n;
  // actual period word: p[i] = root[(i - rot) mod n]
  std::size_t r = least_rotation(root);
  auto cyc = std::make_shared<Cycle>();
  cyc->word.resize(n);
  for (std::size_t j = 0; j < n; ++j) cyc->word[j] = root[(j + r) % n];
  cyc->hash = hash_word(cyc->word);
  // p[i] = root[(i - rot) mod n] = necklace[(i - rot - r) mod n]
  offset_ = (2 * n - (rot + r) % n) % n;
  pre_ = std::move(preperiod);
  cycle_ = std::move(cyc);
}

Word EventuallyPeriodicSeq::period() const {
  Word p(period_length());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = period_symbol(i);
  return p;
}

Symbol EventuallyPeriodicSeq::at(std::size_t index) const {
  if (index == 0) throw Error(ErrorCode::InvalidInput, "sequence index is 1-based");
  if (index <= pre_.size()) return pre_[index - 1];
  return period_symbol(index - pre_.size() - 1);
}

Word EventuallyPeriodicSeq::prefix(std::size_t n) const {
  Word out;
  out.reserve(n);
  for (std::size_t i = 0; i < n && i < pre_.size(); ++i) out.push_back(pre_[i]);
  for (std::size_t i = 0; out.size() < n; ++i) out.push_back(period_symbol(i));
  return out;
}

bool EventuallyPeriodicSeq::same_necklace(const EventuallyPeriodicSeq& other) const noexcept {
  if (cycle_ == other.cycle_) return true;
  return cycle_->hash == other.cycle_->hash && cycle_->word == other.cycle_->word;
}

EventuallyPeriodicSeq EventuallyPeriodicSeq::shifted(std::uint64_t k) const {
  EventuallyPeriodicSeq out;
  out.cycle_ = cycle_;
  if (k <= pre_.size()) {
    out.pre_.assign(pre_.begin() + static_cast<std::ptrdiff_t>(k), pre_.end());
    out.offset_ = offset_;
  } else {
    const std::uint64_t n = cycle_->word.size();
    out.offset_ = static_cast<std::size_t>((offset_ + (k - pre_.size()) % n) % n);
  }
  return out;
}

bool operator==(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
  return a.offset_ == b.offset_ && a.pre_ == b.pre_ && a.same_necklace(b);
}

std::strong_ordering operator<=>(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
  if (auto c = a.pre_.size() <=> b.pre_.size(); c != 0) return c;
  if (auto c = a.period_length() <=> b.period_length(); c != 0) return c;
  if (auto c = a.pre_ <=> b.pre_; c != 0) return c;
  if (!a.same_necklace(b)) return a.cycle_->word <=> b.cycle_->word;
  return a.offset_ <=> b.offset_;
}

std::size_t EventuallyPeriodicSeq::hash() const noexcept {
  std::size_t h = cycle_->hash;
  h ^= hash_word(pre_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= offset_ + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::optional<std::uint64_t> first_difference(const Point& x, const Point& y) {
  const std::uint64_t nx = x.period_length();
  const std::uint64_t ny = y.period_length();
  const std::uint64_t bound = std::max(x.preperiod_length(), y.preperiod_length()) + nx + ny -
                              std::gcd(nx, ny);
  for (std::uint64_t i = 1; i <= bound; ++i) {
    if (x.at(i) != y.at(i)) return i;
  }
  return std::nullopt;
}

Rational rho(const Point& x, const Point& y) {
  auto k = first_difference(x, y);
  if (!k) return Rational(0);
  return dyadic(*k);
}

Order lex_compare(const Point& x, const Point& y) {
  auto k = first_difference(x, y);
  if (!k) return Order::Equal;
  return x.at(*k) < y.at(*k) ? Order::Less : Order::Greater;
}

Point shift(const Point& x, std::uint64_t k) { return x.shifted(k); }

// ---------------------------------------------------------------------------
// text

namespace {

char dyck_char(Symbol s) {
  switch (s) {
    case kDyckOpenSquare: return '[';
    case kDyckCloseSquare: return ']';
    case kDyckOpenRound: return '(';
    case kDyckCloseRound: return ')';
    default: throw Error(ErrorCode::InvalidInput, "symbol outside the Dyck alphabet");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_word(std::span<const Symbol> w, Codec codec) {
  std::string out;
  if (codec == Codec::Dyck) {
    for (Symbol s : w) out.push_back(dyck_char(s));
    return out;
  }
  for (std::size_t i = 0; i < w.size();) {
    if (w[i] < 10) {
      out.push_back(static_cast<char>('0' + w[i]));
      ++i;
      continue;
    }
    out.push_back('<');
    bool first = true;
    while (i < w.size() && w[i] >= 10) {
      if (!first) out.push_back(',');
      out += std::to_string(w[i]);
      first = false;
      ++i;
    }
    out.push_back('>');
  }
  return out;
}

Word parse_word(std::string_view text, Codec codec) {
  text = trim(text);
  Word w;
  if (codec == Codec::Dyck) {
    for (char c : text) {
      switch (c) {
        case '[': w.push_back(kDyckOpenSquare); break;
        case ']': w.push_back(kDyckCloseSquare); break;
        case '(': w.push_back(kDyckOpenRound); break;
        case ')': w.push_back(kDyckCloseRound); break;
        default: throw Error(ErrorCode::InvalidInput, std::string("bad Dyck symbol '") + c + "'");
      }
    }
    return w;
  }
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      w.push_back(static_cast<Symbol>(c - '0'));
      ++i;
    } else if (c == '<') {
      auto close = text.find('>', i);
      if (close == std::string_view::npos) throw Error(ErrorCode::InvalidInput, "unterminated '<'");
      std::string_view body = text.substr(i + 1, close - i - 1);
      while (true) {
        auto comma = body.find(',');
        std::string_view item = trim(body.substr(0, comma));
        Symbol v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
          throw Error(ErrorCode::InvalidInput, "bad symbol '" + std::string(item) + "'");
        }
        w.push_back(v);
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
      i = close + 1;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      throw Error(ErrorCode::InvalidInput, std::string("bad symbol '") + c + "'");
    }
  }
  return w;
}

std::string format_point(const Point& x, Codec codec) {
  const char open = codec == Codec::Dyck ? '{' : '(';
  const char close = codec == Codec::Dyck ? '}' : ')';
  Word per = x.period();
  return format_word(x.preperiod(), codec) + open + format_word(per, codec) + close + "^inf";
}

bool is_point_text(std::string_view text) {
  text = trim(text);
  return text.size() >= 4 && text.substr(text.size() - 4) == "^inf";
}

Point parse_point(std::string_view text, Codec codec) {
  text = trim(text);
  if (!is_point_text(text)) throw Error(ErrorCode::InvalidInput, "point must end with ^inf");
  text.remove_suffix(4);
  text = trim(text);
  const char open = codec == Codec::Dyck ? '{' : '(';
  const char close = codec == Codec::Dyck ? '}' : ')';
  if (text.empty() || text.back() != close) {
    throw Error(ErrorCode::InvalidInput, "point must have the form pre(period)^inf");
  }
  auto o = text.rfind(open);
  if (o == std::string_view::npos) throw Error(ErrorCode::InvalidInput, "missing period bracket");
  Word pre = parse_word(text.substr(0, o), codec);
  Word per = parse_word(text.substr(o + 1, text.size() - o - 2), codec);
  if (per.empty()) throw Error(ErrorCode::InvalidInput, "empty period");
  return Point(std::move(pre), std::move(per));
}

}  // namespace shiftlab
