#include "shiftlab/beta.hpp"

#include "shiftlab/error.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace shiftlab {

namespace {

struct Interval {
  Rational lo;
  Rational hi;
};

// [a,b] * [lo,hi] for 0 < lo <= hi.
Interval mul_positive(const Interval& v, const Interval& b) {
  Rational lo = v.lo >= 0 ? Rational(v.lo * b.lo) : Rational(v.lo * b.hi);
  Rational hi = v.hi >= 0 ? Rational(v.hi * b.hi) : Rational(v.hi * b.lo);
  return {lo, hi};
}

Rational eval_poly(const std::vector<BigInt>& p, const Rational& t) {
  Rational v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + Rational(*it);
  return v;
}

int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// Elements of Q[t]/(P), coefficient vectors of length deg P.
class Field {
 public:
  explicit Field(const std::vector<BigInt>& poly) {
    std::size_t d = poly.size() - 1;
    reduce_.resize(d);
    Rational lead(poly[d]);
    for (std::size_t i = 0; i < d; ++i) reduce_[i] = Rational(-poly[i]) / lead;
  }

  std::size_t degree() const { return reduce_.size(); }

  std::vector<Rational> one() const {
    std::vector<Rational> v(degree(), Rational(0));
    v[0] = 1;
    return v;
  }

  std::vector<Rational> times_t(const std::vector<Rational>& a) const {
    const std::size_t d = degree();
    std::vector<Rational> out(d, Rational(0));
    Rational top = a[d - 1];
    for (std::size_t i = d - 1; i > 0; --i) out[i] = a[i - 1];
    out[0] = 0;
    if (top != 0) {
      for (std::size_t i = 0; i < d; ++i) out[i] += top * reduce_[i];
    }
    return out;
  }

 private:
  std::vector<Rational> reduce_;
};

Interval eval_interval(const std::vector<Rational>& a, const Interval& t) {
  Interval v{a.back(), a.back()};
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    v = mul_positive(v, t);
    v.lo += a[i];
    v.hi += a[i];
  }
  return v;
}

bool is_constant(const std::vector<Rational>& a, Rational* value) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] != 0) return false;
  }
  *value = a[0];
  return true;
}

Point finite_point(const Word& digits, std::size_t j) {
  return Point(Word(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(j)), Word{0});
}

BetaExpansion expand_rational(const Rational& beta, std::size_t n) {
  BetaExpansion out;
  std::map<Rational, std::size_t> seen;
  Rational x = 1;
  seen.emplace(x, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    Rational y = beta * x;
    BigInt d = floor(y);
    out.digits.push_back(static_cast<Symbol>(d.get_ui()));
    x = y - Rational(d);
    if (x == 0) {
      out.finite_at = j;
      out.exact = finite_point(out.digits, j);
      out.digits.resize(n, 0);
      return out;
    }
    if (!out.exact) {
      auto [it, inserted] = seen.emplace(x, j);
      if (!inserted) {
        std::size_t i = it->second;
        Word pre(out.digits.begin(), out.digits.begin() + static_cast<std::ptrdiff_t>(i));
        Word per(out.digits.begin() + static_cast<std::ptrdiff_t>(i), out.digits.end());
        out.exact = Point(std::move(pre), std::move(per));
      }
    }
  }
  return out;
}

BetaExpansion expand_algebraic(const AlgebraicBeta& a, std::size_t n, bool partial) {
  BetaExpansion out;
  Field field(a.poly);
  Interval t{a.lo, a.hi};
  const int sign_lo = sign(eval_poly(a.poly, t.lo));
  std::size_t refinements = 0;

  auto refine = [&]() {
    if (t.lo == t.hi || refinements >= a.max_refinements) return false;
    ++refinements;
    Rational mid = (t.lo + t.hi) / 2;
    int s = sign(eval_poly(a.poly, mid));
    if (s == 0) {
      t.lo = t.hi = mid;
    } else if (s == sign_lo) {
      t.lo = mid;
    } else {
      t.hi = mid;
    }
    return true;
  };

  std::map<std::vector<Rational>, std::size_t> seen;
  std::vector<Rational> x = field.one();
  seen.emplace(x, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<Rational> y = field.times_t(x);
    BigInt d;
    Rational c;
    if (is_constant(y, &c) && c.get_den() == 1) {
      d = c.get_num();
    } else {
      while (true) {
        Interval v = eval_interval(y, t);
        BigInt f = floor(v.lo);
        if (v.hi < Rational(f + 1)) {
          d = f;
          break;
        }
        if (!refine()) {
          if (partial) {
            out.exhausted = true;
            return out;
          }
          throw Error(ErrorCode::PrecisionExhausted,
                      "cannot certify digit " + std::to_string(j) + " of the expansion");
        }
      }
    }
    out.digits.push_back(static_cast<Symbol>(d.get_ui()));
    y[0] -= Rational(d);
    x = std::move(y);
    Rational cx;
    if (is_constant(x, &cx) && cx == 0) {
      out.finite_at = j;
      out.exact = finite_point(out.digits, j);
      out.digits.resize(n, 0);
      return out;
    }
    if (!out.exact) {
      auto [it, inserted] = seen.emplace(x, j);
      if (!inserted) {
        std::size_t i = it->second;
        Word pre(out.digits.begin(), out.digits.begin() + static_cast<std::ptrdiff_t>(i));
        Word per(out.digits.begin() + static_cast<std::ptrdiff_t>(i), out.digits.end());
        out.exact = Point(std::move(pre), std::move(per));
      }
    }
  }
  return out;
}

BetaExpansion expand_interval(const IntervalBeta& b, std::size_t n, bool partial) {
  BetaExpansion out;
  Interval t{b.lo, b.hi};
  Interval x{1, 1};
  for (std::size_t j = 1; j <= n; ++j) {
    Interval y = mul_positive(x, t);
    BigInt f = floor(y.lo);
    if (!(y.hi < Rational(f + 1))) {
      if (partial) {
        out.exhausted = true;
        return out;
      }
      throw Error(ErrorCode::PrecisionExhausted,
                  "interval too wide to certify digit " + std::to_string(j));
    }
    out.digits.push_back(static_cast<Symbol>(f.get_ui()));
    x = {y.lo - Rational(f), y.hi - Rational(f)};
  }
  return out;
}

BetaExpansion expand(const BetaNumber& beta, std::size_t n, bool partial) {
  return std::visit(
      [&](const auto& r) -> BetaExpansion {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return expand_rational(r, n);
        } else if constexpr (std::is_same_v<T, AlgebraicBeta>) {
          return expand_algebraic(r, n, partial);
        } else {
          return expand_interval(r, n, partial);
        }
      },
      beta.repr());
}

}  // namespace

BetaNumber BetaNumber::rational(Rational beta) {
  beta.canonicalize();
  if (beta <= 1) throw Error(ErrorCode::InvalidInput, "beta must exceed 1");
  return BetaNumber(std::move(beta));
}

BetaNumber BetaNumber::algebraic(std::vector<BigInt> poly, Rational lo, Rational hi) {
  while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
  if (poly.size() < 2) throw Error(ErrorCode::InvalidInput, "polynomial must have degree >= 1");
  if (!(lo < hi) || lo <= 0) throw Error(ErrorCode::InvalidInput, "bad isolating interval");
  if (hi <= 1) throw Error(ErrorCode::InvalidInput, "beta must exceed 1");
  int a = sign(eval_poly(poly, lo));
  int b = sign(eval_poly(poly, hi));
  if (a == 0 || b == 0 || a == b) {
    throw Error(ErrorCode::InvalidInput, "interval does not isolate a sign change");
  }
  return BetaNumber(AlgebraicBeta{std::move(poly), std::move(lo), std::move(hi)});
}

BetaNumber BetaNumber::decimal(const std::string& decimal, unsigned precision) {
  Rational mid = parse_rational(decimal);
  Rational radius = 1;
  for (unsigned i = 0; i < precision; ++i) radius /= 10;
  Rational lo = mid - radius;
  if (lo <= 1) throw Error(ErrorCode::InvalidInput, "beta interval must lie above 1");
  return BetaNumber(IntervalBeta{lo, Rational(mid + radius)});
}

BetaNumber BetaNumber::golden_ratio() {
  // t^2 - t - 1
  return algebraic({BigInt(-1), BigInt(-1), BigInt(1)}, Rational(3, 2), Rational(2));
}

Rational BetaNumber::lower() const {
  return std::visit(
      [](const auto& r) -> Rational {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return r;
        } else {
          return r.lo;
        }
      },
      repr_);
}

std::string BetaNumber::describe() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return to_string(r);
        } else if constexpr (std::is_same_v<T, AlgebraicBeta>) {
          std::string s = "root of [";
          for (std::size_t i = 0; i < r.poly.size(); ++i) {
            if (i) s += ",";
            s += r.poly[i].get_str();
          }
          return s + "] in (" + to_string(r.lo) + "," + to_string(r.hi) + ")";
        } else {
          return "[" + to_string(r.lo) + "," + to_string(r.hi) + "]";
        }
      },
      repr_);
}

BetaExpansion beta_expand(const BetaNumber& beta, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "digit count must be positive");
  return expand(beta, n, false);
}

BetaExpansion beta_expand_partial(const BetaNumber& beta, std::size_t n) {
  return expand(beta, n, true);
}

std::size_t BetaHat::known() const noexcept {
  return point ? std::numeric_limits<std::size_t>::max() : prefix.size();
}

Symbol BetaHat::digit(std::size_t i) const {
  if (point) return point->at(i);
  if (i == 0 || i > prefix.size()) {
    throw Error(ErrorCode::Undecided, "d-hat known only to " + std::to_string(prefix.size()) +
                                          " digits");
  }
  return prefix[i - 1];
}

BetaHat beta_hat(const BetaExpansion& d) {
  BetaHat out;
  if (d.finite_at) {
    std::size_t k = *d.finite_at;
    Word w(d.digits.begin(), d.digits.begin() + static_cast<std::ptrdiff_t>(k));
    // k is the first j with x_j = 0, so d_k > 0
    w.back() -= 1;
    out.point = Point::periodic(std::move(w));
  } else if (d.exact) {
    out.point = *d.exact;
  }
  if (out.point) {
    out.prefix = out.point->prefix(std::max<std::size_t>(d.digits.size(), 1));
  } else {
    out.prefix = d.digits;
  }
  return out;
}

BetaHat beta_hat(const Word& digits, bool finite) {
  if (digits.empty() || digits[0] == 0) {
    throw Error(ErrorCode::InvalidInput, "d_beta must start with a positive digit");
  }
  for (Symbol s : digits) {
    if (s > digits[0]) throw Error(ErrorCode::InvalidInput, "digit exceeds d_1 = floor(beta)");
  }
  BetaExpansion e;
  e.digits = digits;
  if (finite) {
    std::size_t k = digits.size();
    while (k > 0 && digits[k - 1] == 0) --k;
    e.finite_at = k;
    e.exact = finite_point(digits, k);
  }
  return beta_hat(e);
}

bool parry_valid(const Point& x) {
  const std::size_t bound = x.preperiod_length() + x.period_length();
  for (std::size_t k = 1; k <= bound; ++k) {
    if (lex_compare(shift(x, k), x) == Order::Greater) return false;
  }
  return true;
}

bool parry_valid(const BetaHat& h) {
  if (h.point) return parry_valid(*h.point);
  const Word& w = h.prefix;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::span<const Symbol> suffix(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
    std::span<const Symbol> head(w.begin(), w.end() - static_cast<std::ptrdiff_t>(k));
    if (lex_compare(suffix, head) == Order::Greater) return false;
  }
  return true;
}

}  // namespace shiftlab
