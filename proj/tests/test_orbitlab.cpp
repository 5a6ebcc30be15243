#include "doctest.h"

#include "shiftlab/error.hpp"
#include "shiftlab/orbitlab.hpp"

#include <functional>
#include <random>

using namespace shiftlab;

namespace {

Point P(const char* s) { return parse_point(s); }
Word W(const char* s) { return parse_word(s); }
Rational Q(long p, long q = 1) { return frac(p, q); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Usage;
}

SystemPtr s12() { return make_sgap(GapSet({1, 2})); }
SystemPtr phi() { return make_beta(BetaNumber::golden_ratio()); }

// x = (loop words in random order) repeated, as an eventually periodic point
Point random_loop_point(std::mt19937_64& rng, const std::vector<Word>& loops, std::size_t pieces) {
  std::uniform_int_distribution<std::size_t> pick(0, loops.size() - 1);
  Word pre, per;
  for (std::size_t i = 0; i < pieces; ++i) {
    const auto& w = loops[pick(rng)];
    pre.insert(pre.end(), w.begin(), w.end());
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& w = loops[pick(rng)];
    per.insert(per.end(), w.begin(), w.end());
  }
  return Point(pre, per);
}

}  // namespace

TEST_CASE("seam margin") {
  CHECK(seam_margin(Q(1, 2)) == 1);
  CHECK(seam_margin(Q(1, 8)) == 3);
  CHECK(seam_margin(Q(1, 10)) == 3);
  CHECK(seam_margin(Q(1, 16)) == 4);
  CHECK(seam_margin(Q(1, 3)) == 1);
}

TEST_CASE("closing in X_S") {
  auto sys = s12();
  auto x = P("(01)^inf");
  ClosingOptions strict;
  strict.reuse_periodic = false;
  auto c = close_orbit(*sys, x, Q(1, 8), 5, strict);
  CHECK(check_closing(*sys, c).ok());
  CHECK(c.strategy == "sgap-truncate");
  CHECK(c.p >= 5);
  CHECK(dbar(co_measure(c.y), empirical(x, c.p)).value < Q(1, 8));

  // a certificate produced elsewhere is judged on its own terms
  ClosingCertificate given{x, Q(1, 8), 5, 97, 99, Point::periodic(parse_word("01010101010101010101010101010101010101010101010101010101010101010101010101010101010101010101010100")), "given"};
  given.y = Point::periodic([] {
    Word w;
    for (int i = 0; i < 49; ++i) w.insert(w.end(), {0, 1});
    w.push_back(0);
    return w;
  }());
  CHECK(check_closing(*sys, given).ok());
  given.p = 85;
  CHECK_FALSE(check_closing(*sys, given).ok());  // q > (1+eps) p
  given.p = 98;
  CHECK_FALSE(check_closing(*sys, given).ok());     // Bowen ball needs p + 2 agreeing symbols

  auto self = close_orbit(*sys, x, Q(1, 8), 5);
  CHECK(self.strategy == "periodic");
  CHECK(self.y == x);
  CHECK(self.p == 6);
  CHECK(self.q == 6);

  CHECK(code_of([&] { close_orbit(*sys, Source(W("0101010101")), Q(1, 8), 5); }) == ErrorCode::NoClosureInRange);
  CHECK(code_of([&] { close_orbit(*sys, P("(011)^inf"), Q(1, 8), 5); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { close_orbit(*sys, x, Q(3, 4), 5); }) == ErrorCode::InvalidInput);

  auto from_word = close_orbit(*sys, Source(P("001(01)^inf").prefix(200)), Q(1, 10), 20);
  CHECK(check_closing(*sys, from_word).ok());
}

TEST_CASE("closing in X_phi") {
  auto sys = phi();
  auto zero = close_orbit(*sys, P("(0)^inf"), Q(1, 4), 7);
  CHECK(zero.y == P("(0)^inf"));
  CHECK(zero.p == 7);
  CHECK(zero.q == 7);

  ClosingOptions strict;
  strict.reuse_periodic = false;
  auto c = close_orbit(*sys, P("(10)^inf"), Q(1, 8), 4, strict);
  CHECK(check_closing(*sys, c).ok());
  CHECK(dbar(co_measure(c.y), empirical(P("(10)^inf"), c.p)).value < Q(1, 8));

  // ends on a forward edge labelled 1: closed through the back edge labelled 0
  auto d = close_orbit(*sys, P("(100)^inf"), Q(1, 4), 3, strict);
  CHECK(check_closing(*sys, d).ok());
  CHECK(code_of([&] { close_orbit(*sys, P("(110)^inf"), Q(1, 4), 3); }) == ErrorCode::InvalidInput);
}

TEST_CASE("closing on finite graphs") {
  auto golden = make_golden_mean();
  ClosingOptions strict;
  strict.reuse_periodic = false;
  auto c = close_orbit(*golden, P("0(01)^inf"), Q(1, 8), 6, strict);
  CHECK(check_closing(*golden, c).ok());
  auto full = make_full_shift(2);
  auto f = close_orbit(*full, P("0(011)^inf"), Q(1, 8), 10, strict);
  CHECK(check_closing(*full, f).ok());
  CHECK(f.p + seam_margin(Q(1, 8)) - 1 == f.q);

  FiniteGraphData data;
  data.vertices = 2;
  data.root = 0;
  data.edges = {{0, 1, 0}, {1, 0, 1}, {1, 1, 2}};
  auto coded = make_coded(data);
  auto k = close_orbit(*coded, P("0(2)^inf"), Q(1, 8), 5, strict);
  CHECK(k.strategy == "root-return");
  CHECK(check_closing(*coded, k).ok());
  CHECK(k.q == k.p + 3);  // one connector symbol plus the seam margin
}

TEST_CASE("sft_close") {
  auto full = make_sft_graph(SftSystem(2, {}));
  CHECK(sft_close(*full, W("0110")) == P("(0110)^inf"));
  auto golden = make_sft_graph(SftSystem(2, {W("11")}));
  CHECK(code_of([&] { sft_close(*golden, W("0110")); }) == ErrorCode::NotReadable);
  CHECK(sft_close(*golden, W("010")) == P("(010)^inf"));
  CHECK(sft_close(*golden, W("1")) == P("(10)^inf"));
  CHECK(sft_close(*golden, W("0100")) == P("(0100)^inf"));
}

TEST_CASE("closing certificates on seeded orbits") {
  std::mt19937_64 rng(404);
  const std::vector<Word> s_loops{W("01"), W("001")};
  const std::vector<Word> phi_loops{W("0"), W("100")};
  std::uniform_int_distribution<int> pieces(0, 6), nn(1, 40);
  const Rational eps_choices[] = {Q(1, 2), Q(1, 4), Q(1, 8), Q(1, 10), Q(1, 16)};
  ClosingOptions strict;
  strict.reuse_periodic = false;
  for (int trial = 0; trial < 40; ++trial) {
    bool sgap = trial % 2 == 0;
    auto sys = sgap ? s12() : phi();
    Point x = random_loop_point(rng, sgap ? s_loops : phi_loops, pieces(rng));
    Rational eps = eps_choices[trial % 5];
    auto c = close_orbit(*sys, x, eps, nn(rng), strict);
    CAPTURE(format_point(x));
    CHECK(check_closing(*sys, c).ok());
    CHECK(dbar(co_measure(c.y), empirical(x, c.p)).value < eps);
    CHECK(dbar(empirical(c.y, c.q), empirical(x, c.p)).value <= eps);
  }
}

TEST_CASE("linking") {
  auto sys = s12();
  auto y1 = P("(01)^inf"), y2 = P("(001)^inf");
  auto c = link(*sys, y1, y2, Q(1, 2), Q(1, 10));
  CHECK(check_link(*sys, c).ok());
  CHECK(c.q1 == c.a * 2);
  CHECK(c.q2 == c.q1 + c.b * 3);
  auto target = convex({{Q(1, 2), co_measure(y1)}, {Q(1, 2), co_measure(y2)}});
  CHECK(dbar(co_measure(c.z), target).value <= Q(3, 10));

  LinkCertificate given = c;
  given.a = 30;
  given.b = 20;
  given.q1 = 60;
  given.p1 = 58;
  given.q2 = 120;
  given.p2 = 58;
  Word block;
  for (int i = 0; i < 30; ++i) block.insert(block.end(), {0, 1});
  for (int i = 0; i < 20; ++i) block.insert(block.end(), {0, 0, 1});
  given.z = Point::periodic(block);
  CHECK(check_link(*sys, given).ok());
  given.p2 = 60;
  CHECK_FALSE(check_link(*sys, given).ok());

  auto one = link(*sys, y1, y2, Q(1), Q(1, 10));
  CHECK(one.degenerate);
  CHECK(one.z == y1);
  CHECK(one.p2 == 0);
  CHECK(check_link(*sys, one).ok());
  auto same = link(*sys, y1, y1, Q(1, 3), Q(1, 8));
  CHECK(same.z == y1);

  LinkOptions div;
  div.divisor = 7;
  auto d = link(*sys, y1, y2, Q(1, 3), Q(1, 8), div);
  CHECK(d.p1 % 7 == 0);
  CHECK(d.p2 % 7 == 0);
  CHECK(check_link(*sys, d).ok());

  LinkOptions tiny;
  tiny.a_max = 2;
  CHECK(code_of([&] { link(*sys, y1, y2, Q(1, 2), Q(1, 10), tiny); }) == ErrorCode::NoCountsInRange);
  CHECK(code_of([&] { link(*sys, P("(011)^inf"), y2, Q(1, 2), Q(1, 10)); }) == ErrorCode::InvalidInput);
}

TEST_CASE("linking bound on random draws") {
  std::mt19937_64 rng(77);
  const std::vector<Word> s_loops{W("01"), W("001")};
  const std::vector<Word> phi_loops{W("0"), W("100")};
  std::uniform_int_distribution<int> lam(0, 12), len(1, 4);
  const Rational eps_choices[] = {Q(1, 4), Q(1, 8), Q(1, 10), Q(1, 16)};
  for (int trial = 0; trial < 30; ++trial) {
    bool sgap = trial % 2 == 0;
    auto sys = sgap ? s12() : phi();
    const auto& loops = sgap ? s_loops : phi_loops;
    auto draw = [&] {
      Word w;
      for (int i = len(rng); i > 0; --i) {
        const auto& piece = loops[rng() % loops.size()];
        w.insert(w.end(), piece.begin(), piece.end());
      }
      return Point::periodic(w);
    };
    Point y1 = draw(), y2 = draw();
    Rational lambda = Q(lam(rng), 12), eps = eps_choices[trial % 4];
    auto c = link(*sys, y1, y2, lambda, eps);
    CAPTURE(format_point(y1));
    CAPTURE(format_point(y2));
    CHECK(check_link(*sys, c).ok());
    auto target = convex({{lambda, co_measure(y1)}, {1 - lambda, co_measure(y2)}});
    CHECK(dbar(co_measure(c.z), target).value <= 3 * eps);
  }
}

TEST_CASE("linking with lambda + eps past 1") {
  // only the lower ratio bound binds, so the count search must reach past it
  auto sys = phi();
  auto c = link(*sys, P("(100)^inf"), P("(00100)^inf"), Q(11, 12), Q(1, 10));
  CHECK(check_link(*sys, c).ok());
  auto d = link(*s12(), P("(01)^inf"), P("(0010101)^inf"), Q(11, 12), Q(1, 10));
  CHECK(check_link(*s12(), d).ok());
}

TEST_CASE("convex approximation") {
  auto sys = s12();
  auto single = approx_convex(*sys, {{Q(1), P("(01)^inf")}}, Q(1, 8));
  CHECK(single.z == P("(01)^inf"));
  CHECK(single.distance == 0);

  Combo two{{Q(1, 3), P("(01)^inf")}, {Q(2, 3), P("(001)^inf")}};
  auto r = approx_convex(*sys, two, dyadic(5));
  CHECK(r.distance < dyadic(5));
  CHECK(r.distance == dbar(co_measure(r.z), combo_measure(two)).value);
  CHECK(r.trace.size() == 1);

  Combo three{{Q(1, 4), P("(01)^inf")}, {Q(1, 4), P("(001)^inf")}, {Q(1, 2), P("(01001)^inf")}};
  auto t = approx_convex(*sys, three, dyadic(4));
  CHECK(t.trace.size() == 2);
  CHECK(t.distance < dyadic(4));
  CHECK(code_of([&] { approx_convex(*sys, {{Q(1, 2), P("(01)^inf")}}, Q(1, 8)); }) ==
        ErrorCode::WeightsNotNormalized);

  auto beta = phi();
  auto b = approx_convex(*beta, {{Q(1, 2), P("(0)^inf")}, {Q(1, 2), P("(100)^inf")}}, dyadic(4));
  CHECK(b.distance < dyadic(4));
}

TEST_CASE("generic prefixes") {
  auto beta = phi();
  auto fixed = generic_prefix(*beta, {{{Q(1), P("(0)^inf")}}}, 20000);
  CHECK(fixed.prefix.size() >= 20000);
  for (const auto& cp : fixed.checkpoints) CHECK(cp.lo == 0);

  auto sys = s12();
  auto pure = generic_prefix(*sys, {{{Q(1), P("(01)^inf")}}}, 100000);
  CHECK(pure.stages.size() >= 2);
  CHECK(pure.checkpoints.back().hi <= dyadic(12));

  CHECK(code_of([&] { generic_prefix(*sys, {{{Q(1), P("(01001)^inf")}}}, 5); }) == ErrorCode::HorizonTooSmall);
}

TEST_CASE("constant target at 10^5") {
  auto sys = s12();
  Combo c{{Q(1, 3), P("(01)^inf")}, {Q(2, 3), P("(001)^inf")}};
  auto r = generic_prefix(*sys, {c}, 100000);
  CHECK(r.prefix.size() == 100000 + kDefaultTruncation);
  CHECK(r.certified >= 100000);
  CHECK(r.checkpoints.back().n == 100000);
  CHECK(r.checkpoints.back().hi <= Rational(1, 20));
  for (const auto& cp : r.checkpoints) CHECK(cp.hi - cp.lo <= dyadic(12));
}
