#include "doctest.h"

#include "shiftlab/error.hpp"
#include "shiftlab/graphview.hpp"

#include <cmath>
#include <functional>

using namespace shiftlab;

namespace {

Word W(const char* s) { return parse_word(s); }

// plain recursive path count, no tables
std::uint64_t brute_returns(const LabelledGraph& g, Vertex v, std::size_t steps) {
  if (steps == 0) return v == g.root() ? 1 : 0;
  std::uint64_t total = 0;
  for (const auto& e : g.out_edges(v)) total += brute_returns(g, e.target, steps - 1);
  return total;
}

std::uint64_t brute_first_returns(const LabelledGraph& g, Vertex v, std::size_t steps, bool start) {
  if (!start && v == g.root()) return steps == 0 ? 1 : 0;
  if (steps == 0) return 0;
  std::uint64_t total = 0;
  for (const auto& e : g.out_edges(v)) total += brute_first_returns(g, e.target, steps - 1, false);
  return total;
}

GraphPtr gamma_phi() { return make_gamma_beta(beta_hat(beta_expand(BetaNumber::golden_ratio(), 8))); }

}  // namespace

TEST_CASE("word walks") {
  auto gs = make_gamma_s(GapSet({1, 2}));
  CHECK(word_walk(*gs, 0, W("01")) == std::vector<Vertex>{0});
  CHECK(word_walk(*gamma_phi(), 0, W("11")).empty());
  CHECK(word_walk(*gs, 5, Word{}) == std::vector<Vertex>{5});
  auto path = walk_path(*gs, 0, W("0100"));
  REQUIRE(path);
  CHECK(*path == std::vector<Vertex>{0, 1, 0, 1, 2});
  CHECK_FALSE(walk_path(*gs, 0, W("0001")));

  // 0^j 1 read from a deep vertex of Gamma_S
  auto deep = make_gamma_s(GapSet({100}));
  CHECK(readable(*deep, W("01")));
  CHECK_FALSE(readable(*deep, W("1001")));
}

TEST_CASE("right resolving") {
  CHECK(right_resolving_check(*gamma_phi(), 100));
  CHECK(right_resolving_check(*make_gamma_s(GapSet({1, 2})), 100));
  CHECK(right_resolving_check(*make_gamma_s(GapSet({}, GapSet::Tail{1, 1})), 100));
  CHECK(right_resolving_check(*make_gamma_prime(), 100));
  CHECK(right_resolving_check(*make_gamma_ent(), 100));
  auto bad = make_finite_graph(FiniteGraphData{1, 0, {{0, 0, 0}, {0, 0, 0}}});
  CHECK_FALSE(right_resolving_check(*bad, 10));
}

TEST_CASE("loops through the root") {
  CHECK(loops_through(*make_gamma_double_prime(), 4) == std::vector<Word>{W("01"), W("0011"), W("0101")});
  CHECK(loops_through(*make_gamma_s(GapSet({1})), 2) == std::vector<Word>{W("01")});
  CHECK(loops_through(*make_gamma_ent(), 3) == std::vector<Word>{W("02"), W("012")});
  CHECK_THROWS_AS(loops_through(*make_gamma_ent(), 65), Error);
  CHECK_THROWS_AS(loops_through(*make_gamma_beta(beta_hat(W("2"), true)), 30, 1000), Error);

  struct Case {
    GraphPtr g;
    SystemPtr sys;
    std::size_t len;
  };
  std::vector<Case> cases = {
      {make_gamma_s(GapSet({1, 2})), make_sgap(GapSet({1, 2})), 16},
      {make_gamma_s(GapSet({2, 5})), make_sgap(GapSet({2, 5})), 18},
      {gamma_phi(), make_beta(BetaNumber::golden_ratio()), 14},
      {make_gamma_beta(beta_hat(W("2"), true)), make_beta(BetaNumber::rational(2)), 12},
      {make_gamma_double_prime(), make_counterexample(CounterexampleKind::XDoublePrime), 16},
      {make_gamma_prime(), make_counterexample(CounterexampleKind::XPrime), 16},
  };
  for (const auto& c : cases) {
    auto loops = loops_through(*c.g, c.len);
    CHECK(!loops.empty());
    for (const auto& w : loops) {
      CHECK_MESSAGE(c.sys->contains(w), format_word(w));
      CHECK(c.sys->contains_periodic(w));
      CHECK(word_walk(*c.g, c.g->root(), w).size() >= 1);
    }
  }
}

TEST_CASE("XPRIME loops put at least half their mass on 2") {
  for (const auto& w : loops_through(*make_gamma_prime(), 20)) {
    auto twos = std::count(w.begin(), w.end(), Symbol{2});
    CHECK(2 * static_cast<std::size_t>(twos) >= w.size());
  }
}

TEST_CASE("graph walks agree with the membership oracles") {
  struct Case {
    GraphPtr g;
    SystemPtr sys;
    std::size_t len;
  };
  std::vector<Case> cases = {
      {gamma_phi(), make_beta(BetaNumber::golden_ratio()), 14},
      {make_gamma_beta(beta_hat(W("2"), true)), make_beta(BetaNumber::rational(2)), 9},
      {make_gamma_s(GapSet({1}, GapSet::Tail{4, 3})), make_sgap(GapSet({1}, GapSet::Tail{4, 3})), 14},
      {make_gamma_double_prime(), make_counterexample(CounterexampleKind::XDoublePrime), 14},
      {make_gamma_prime(), make_counterexample(CounterexampleKind::XPrime), 9},
  };
  for (const auto& c : cases) {
    const std::size_t k = *c.sys->alphabet_size();
    for (std::size_t len = 0; len <= c.len; ++len) {
      Word w(len, 0);
      while (true) {
        REQUIRE_MESSAGE(readable(*c.g, w) == c.sys->contains(w), c.sys->describe() << " " << format_word(w));
        std::size_t i = 0;
        while (i < len && w[i] == k - 1) w[i++] = 0;
        if (i == len) break;
        ++w[i];
      }
    }
  }
}

// For finite S the graph cannot read a leading 0-run longer than max S, while
// the forbidden-word language allows it; reading still implies membership.
TEST_CASE("finite gap sets: graph reading implies membership") {
  for (auto gaps : {GapSet({1, 2}), GapSet({2, 5})}) {
    auto g = make_gamma_s(gaps);
    auto sys = make_sgap(gaps);
    for (std::size_t len = 0; len <= 14; ++len) {
      for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
        Word w(len);
        for (std::size_t i = 0; i < len; ++i) w[i] = (bits >> i) & 1;
        if (readable(*g, w)) REQUIRE(sys->contains(w));
      }
    }
  }
  CHECK(make_sgap(GapSet({1, 2}))->contains(W("0001")));
  CHECK_FALSE(readable(*make_gamma_s(GapSet({1, 2})), W("0001")));
}

TEST_CASE("finite SFT presentation") {
  auto sft = make_golden_mean();
  auto g = make_sft_graph(dynamic_cast<const SftSystem&>(*sft));
  CHECK(g->vertex_count() == 2u);
  CHECK(right_resolving_check(*g, 10));
  CHECK(readable(*g, W("0100101")));
  CHECK_FALSE(readable(*g, W("0110")));
  CHECK(shortest_connector(*g, 1, 1, 4)->empty());
  CHECK(*shortest_connector(*g, 1, 0, 4) == W("0"));
  CHECK(*shortest_connector(*g, 0, 1, 4) == W("1"));
  auto full = make_sft_graph(SftSystem(2, {}));
  CHECK(full->vertex_count() == 1u);
}

TEST_CASE("return counts") {
  auto ent = make_gamma_ent();
  auto c = return_counts(*ent, 30);
  CHECK(c.r[0] == 1);
  CHECK(c.l[1] == 0);
  for (std::size_t n = 2; n <= 30; ++n) CHECK(c.l[n] == 1);
  CHECK(c.r[2] == 1);
  CHECK(c.r[3] == 1);
  CHECK(c.r[4] == 2);
  CHECK(c.r[5] == 3);
  CHECK(c.r[6] == 5);
  for (std::size_t n = 4; n <= 25; ++n) CHECK(c.r[n] == c.r[n - 1] + c.r[n - 2]);
  for (std::size_t n = 0; n <= 30; ++n) CHECK(c.l[n] <= c.r[n]);
  // r_{k+l} >= r_k r_l for returns through the root
  for (std::size_t a = 0; a <= 15; ++a) {
    for (std::size_t b = 0; a + b <= 30; ++b) CHECK(c.r[a + b] >= c.r[a] * c.r[b]);
  }
  CHECK(return_counts(*ent, 20).spr_margin > 0);
  CHECK_THROWS_AS(return_counts(*ent, 201), Error);

  for (GraphPtr g : {make_gamma_s(GapSet({1, 2})), gamma_phi(), make_gamma_double_prime(), ent,
                     make_gamma_beta(beta_hat(W("2"), true))}) {
    auto counts = return_counts(*g, 12);
    for (std::size_t n = 0; n <= 12; ++n) {
      CHECK(counts.r[n] == brute_returns(*g, g->root(), n));
      if (n > 0) CHECK(counts.l[n] == brute_first_returns(*g, g->root(), n, true));
    }
  }
  // parallel back edges are counted: 1^inf-Gamma of beta = 2 has r_n = 2^(n-1)
  auto two = return_counts(*make_gamma_beta(beta_hat(W("2"), true)), 10);
  CHECK(two.r[10] == 512);
  CHECK(std::abs(log_big(BigInt(1) << 100) - 100 * std::log(2.0)) < 1e-9);
}
