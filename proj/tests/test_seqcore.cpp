#include "doctest.h"

#include "shiftlab/error.hpp"
#include "shiftlab/seqcore.hpp"

#include <random>

using namespace shiftlab;

namespace {

Point P(const char* s) { return parse_point(s); }
Word W(const char* s) { return parse_word(s); }

Word random_word(std::mt19937_64& rng, std::size_t len, Symbol k) {
  std::uniform_int_distribution<Symbol> d(0, k - 1);
  Word w(len);
  for (auto& s : w) s = d(rng);
  return w;
}

Point random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pl(0, 4), ql(1, 5);
  return Point(random_word(rng, pl(rng), 2), random_word(rng, ql(rng), 2));
}

// symbol-stream comparison far beyond any period, independent of first_difference
std::optional<std::uint64_t> scan_difference(const Point& x, const Point& y) {
  Word a = x.prefix(400), b = y.prefix(400);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return i + 1;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("primitive roots") {
  auto r = primitive_root(W("0101"));
  CHECK(r.root == W("01"));
  CHECK(r.multiplicity == 2);
  CHECK(primitive_root(W("011")).multiplicity == 1);
  r = primitive_root(W("001001001"));
  CHECK(r.root == W("001"));
  CHECK(r.multiplicity == 3);
  CHECK_THROWS_AS(primitive_root(Word{}), Error);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    Word w = random_word(rng, 1 + rng() % 9, 3);
    auto base = primitive_root(w);
    std::size_t m = 1 + rng() % 8;
    Word big;
    for (std::size_t i = 0; i < m; ++i) big.insert(big.end(), w.begin(), w.end());
    auto r2 = primitive_root(big);
    CHECK(r2.root == base.root);
    CHECK(r2.multiplicity == m * base.multiplicity);
  }
}

TEST_CASE("canonical form") {
  Point x = P("0(10)^inf");
  CHECK(x.preperiod_length() == 0);
  CHECK(x == P("(01)^inf"));
  CHECK(P("(0101)^inf").period_length() == 2);
  CHECK(P("1101(01)^inf") == P("11(01)^inf"));
  CHECK(P("<12,3>(0)^inf").preperiod() == Word{12, 3});
  CHECK(format_point(P("0(10)^inf")) == "(01)^inf");
  CHECK(format_point(P("7<10,11>(<12>)^inf")) == "7<10,11>(<12>)^inf");
  CHECK(format_point(parse_point("{[]}^inf", Codec::Dyck), Codec::Dyck) == "{[]}^inf");
  CHECK_THROWS_AS(parse_point("01"), Error);
  CHECK_THROWS_AS(parse_point("0()^inf"), Error);

  // canonical forms agree with stream equality
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    Point a = random_point(rng), b = random_point(rng);
    CHECK((a == b) == !scan_difference(a, b).has_value());
    if (a == b) CHECK(a.hash() == b.hash());
  }
}

TEST_CASE("rho") {
  Point x = P("(01)^inf");
  CHECK(rho(x, x) == 0);
  CHECK(rho(x, P("(001)^inf")) == Rational(1, 4));
  for (unsigned k = 0; k < 20; ++k) {
    Word pre(k, 0);
    pre.push_back(1);
    CHECK(rho(P("(0)^inf"), Point(pre, {0})) == dyadic(k + 1));
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    Point a = random_point(rng), b = random_point(rng), c = random_point(rng);
    CHECK(rho(a, b) == rho(b, a));
    CHECK(rho(a, c) <= rho(a, b) + rho(b, c));
    CHECK(first_difference(a, b) == scan_difference(a, b));
    CHECK((rho(a, b) == 0) == (a == b));
  }
}

TEST_CASE("lexicographic order") {
  CHECK(lex_compare(P("(1)^inf"), P("(1)^inf")) == Order::Equal);
  CHECK(lex_compare(P("(01)^inf"), P("(10)^inf")) == Order::Less);
  CHECK(lex_compare(std::span<const Symbol>(W("101")), W("1001")) == Order::Greater);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    Point a = random_point(rng), b = random_point(rng);
    auto k = scan_difference(a, b);
    Order o = lex_compare(a, b);
    if (!k) {
      CHECK(o == Order::Equal);
    } else {
      CHECK(o == (a.at(*k) < b.at(*k) ? Order::Less : Order::Greater));
    }
  }
}

TEST_CASE("shift") {
  Point x = P("(01)^inf");
  CHECK(shift(x, 0) == x);
  CHECK(shift(x, 1) == P("(10)^inf"));
  Point y = shift(P("0(10)^inf"), 1);
  CHECK(y == P("(10)^inf"));
  CHECK(y.preperiod_length() == 0);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    Point p = random_point(rng);
    std::uint64_t a = rng() % 51, b = rng() % 51;
    CHECK(shift(shift(p, a), b) == shift(p, a + b));
    Word s = p.prefix(200);
    CHECK(shift(p, a).prefix(100) == Word(s.begin() + a, s.begin() + a + 100));
    if (p.is_periodic()) {
      CHECK(shift(p, a).is_periodic());
      CHECK(shift(p, a).period_length() == p.period_length());
    }
  }
}

TEST_CASE("word text") {
  CHECK(format_word(Word{1, 0, 12, 13, 2}) == "10<12,13>2");
  CHECK(parse_word("10<12,13>2") == Word{1, 0, 12, 13, 2});
  CHECK(parse_word("[()]", Codec::Dyck) ==
        Word{kDyckOpenSquare, kDyckOpenRound, kDyckCloseRound, kDyckCloseSquare});
  CHECK_THROWS_AS(parse_word("1x"), Error);
  CHECK_THROWS_AS(parse_word("<1"), Error);
}
