#include "shiftlab/orbitlab.hpp"

#include "shiftlab/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace shiftlab {

std::size_t seam_margin(const Rational& eps) {
  if (eps <= 0) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  std::size_t m = 0;
  while (dyadic(m + 1) >= eps) ++m;
  return m;
}

std::string CheckResult::summary() const {
  std::string out;
  for (const auto& f : failures) out += (out.empty() ? "" : "; ") + f;
  return out.empty() ? "ok" : out;
}

namespace {

void check_eps(const Rational& eps) {
  if (eps <= 0 || eps > Rational(1, 2)) {
    throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0, 1/2], got " + to_string(eps));
  }
}

std::size_t available(const Source& x) {
  if (std::holds_alternative<Word>(x)) return std::get<Word>(x).size();
  return std::numeric_limits<std::size_t>::max();
}

Word take(const Source& x, std::size_t n) {
  if (const auto* w = std::get_if<Word>(&x)) return Word(w->begin(), w->begin() + static_cast<std::ptrdiff_t>(std::min(n, w->size())));
  return std::get<Point>(x).prefix(n);
}

bool within(std::size_t q, std::size_t p, const Rational& eps) { return Rational(q) <= (1 + eps) * p; }

ClosingCertificate finish(const ShiftSystem& system, const Source& x, const Rational& eps, std::size_t N,
                          std::size_t p, std::size_t q, Word block, std::string strategy) {
  ClosingCertificate c{x, eps, N, p, q, Point::periodic(std::move(block)), std::move(strategy)};
  auto check = check_closing(system, c);
  if (!check.ok()) throw std::logic_error("closing certificate rejected: " + check.summary());
  return c;
}

// SGAP: y = (x_1 .. x_q)^inf. With x admissible, the only new gap is the one
// wrapping around the block, so it alone is tested before the full check.
std::optional<ClosingCertificate> close_sgap(const SGapSystem& sys, const Source& x, const Rational& eps,
                                             std::size_t N, std::size_t A, std::size_t limit) {
  Word prefix = take(x, limit);
  if (!sys.contains(prefix)) throw Error(ErrorCode::InvalidInput, "x is not admissible");
  std::size_t lead = 0;
  while (lead < prefix.size() && prefix[lead] == 0) ++lead;
  std::size_t trail = 0;
  for (std::size_t e = 1; e <= prefix.size(); ++e) {
    trail = prefix[e - 1] == 0 ? trail + 1 : 0;
    if (e + 1 < N + A) continue;
    std::size_t p = e + 1 - A;
    if (!within(e, p, eps)) continue;
    bool ones = lead < e;
    if (ones && !sys.gaps().contains(trail + lead)) continue;
    Word block(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(e));
    if (!sys.contains_periodic(block)) continue;
    return finish(sys, x, eps, N, p, e, std::move(block), "sgap-truncate");
  }
  return std::nullopt;
}

// BETA: read x from v_0 in Gamma_beta. A block ending at v_0 closes as it is;
// otherwise its last edge, read forward with a positive label, is swapped for
// the back edge labelled one less, which also ends at v_0.
std::optional<ClosingCertificate> close_beta(const BetaSystem& sys, const Source& x, const Rational& eps,
                                             std::size_t N, std::size_t A, std::size_t limit) {
  auto g = make_gamma_beta(sys.hat());
  Word prefix = take(x, limit);
  Vertex v = g->root();
  for (std::size_t e = 1; e <= prefix.size(); ++e) {
    const Symbol s = prefix[e - 1];
    std::optional<Vertex> next;
    for (const auto& edge : g->out_edges(v)) {
      if (edge.label == s) next = edge.target;
    }
    if (!next) throw Error(ErrorCode::InvalidInput, "x is not admissible (not readable in Gamma_beta)");
    v = *next;
    std::size_t agreed = e;
    Word block(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(e));
    if (v != g->root()) {
      if (s == 0) continue;
      block.back() = s - 1;
      agreed = e - 1;
    }
    if (agreed + 1 < N + A) continue;
    std::size_t p = agreed + 1 - A;
    if (!within(e, p, eps)) continue;
    return finish(sys, x, eps, N, p, e, std::move(block), v == g->root() ? "beta-root" : "beta-back-edge");
  }
  return std::nullopt;
}

// Finite graphs: read x from each allowed start and return along a shortest
// path; the block is x_1 .. x_e plus the connector.
std::optional<ClosingCertificate> close_finite(const ShiftSystem& sys, const LabelledGraph& g,
                                               std::vector<Vertex> starts, const Source& x,
                                               const Rational& eps, std::size_t N, std::size_t A,
                                               std::size_t limit, const std::string& strategy) {
  const std::size_t V = *g.vertex_count();
  // reverse BFS distances to each start, computed on demand
  std::map<Vertex, std::vector<std::size_t>> dist_to;
  std::vector<std::vector<Vertex>> reverse(V);
  for (Vertex u = 0; u < V; ++u) {
    for (const auto& e : g.out_edges(u)) reverse[e.target].push_back(u);
  }
  auto distances = [&](Vertex s) -> const std::vector<std::size_t>& {
    auto it = dist_to.find(s);
    if (it != dist_to.end()) return it->second;
    std::vector<std::size_t> d(V, std::numeric_limits<std::size_t>::max());
    std::deque<Vertex> queue{s};
    d[s] = 0;
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : reverse[u]) {
        if (d[w] == std::numeric_limits<std::size_t>::max()) {
          d[w] = d[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist_to.emplace(s, std::move(d)).first->second;
  };

  std::vector<std::pair<Vertex, std::set<Vertex>>> walks;
  for (Vertex s : starts) walks.push_back({s, {s}});
  Word prefix = take(x, limit);
  for (std::size_t e = 1; e <= prefix.size(); ++e) {
    for (auto& [s, here] : walks) {
      std::set<Vertex> next;
      for (Vertex u : here) {
        for (const auto& edge : g.out_edges(u)) {
          if (edge.label == prefix[e - 1]) next.insert(edge.target);
        }
      }
      here = std::move(next);
    }
    std::erase_if(walks, [](const auto& w) { return w.second.empty(); });
    if (walks.empty()) throw Error(ErrorCode::InvalidInput, "x is not admissible (not readable in the graph)");
    if (e + 1 < N + A) continue;
    std::size_t p = e + 1 - A;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    Vertex from = 0, to = 0;
    for (const auto& [s, here] : walks) {
      const auto& d = distances(s);
      for (Vertex u : here) {
        if (d[u] < best) {
          best = d[u];
          from = u;
          to = s;
        }
      }
    }
    if (best == std::numeric_limits<std::size_t>::max() || !within(e + best, p, eps)) continue;
    Word block(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(e));
    auto connector = shortest_connector(g, from, to, V);
    block.insert(block.end(), connector->begin(), connector->end());
    const std::size_t q = block.size();
    return finish(sys, x, eps, N, p, q, std::move(block), strategy);
  }
  return std::nullopt;
}

}  // namespace

ClosingCertificate close_orbit(const ShiftSystem& system, const Source& x, const Rational& eps, std::size_t N,
                               const ClosingOptions& opts) {
  check_eps(eps);
  if (N == 0) throw Error(ErrorCode::InvalidInput, "N must be at least 1");
  const std::size_t A = seam_margin(eps);

  if (const auto* pt = std::get_if<Point>(&x); pt && opts.reuse_periodic && pt->is_periodic() &&
                                                  system.contains_periodic(pt->period())) {
    std::size_t r = pt->period_length();
    std::size_t q = r * ((N + r - 1) / r);
    return finish(system, x, eps, N, q, q, pt->period(), "periodic");
  }

  const std::size_t limit = std::min(available(x), opts.max_length);
  std::optional<ClosingCertificate> out;
  switch (system.kind()) {
    case SystemKind::SGap:
      out = close_sgap(static_cast<const SGapSystem&>(system), x, eps, N, A, limit);
      break;
    case SystemKind::Beta:
      out = close_beta(static_cast<const BetaSystem&>(system), x, eps, N, A, limit);
      break;
    case SystemKind::Coded: {
      const auto& data = static_cast<const CodedSystem&>(system).graph();
      auto g = make_finite_graph(data);
      out = close_finite(system, *g, {data.root}, x, eps, N, A, limit, "root-return");
      break;
    }
    case SystemKind::Full:
    case SystemKind::Sft: {
      GraphPtr g;
      if (system.kind() == SystemKind::Sft) {
        g = make_sft_graph(static_cast<const SftSystem&>(system));
      } else {
        g = make_sft_graph(SftSystem(*system.alphabet_size(), {}));
      }
      std::vector<Vertex> starts(*g->vertex_count());
      std::iota(starts.begin(), starts.end(), Vertex{0});
      out = close_finite(system, *g, starts, x, eps, N, A, limit, "sft-return");
      break;
    }
    default:
      throw Error(ErrorCode::InvalidInput, std::string("no closing strategy for ") + to_string(system.kind()));
  }
  if (!out) {
    throw Error(ErrorCode::NoClosureInRange,
                "no admissible (p, q) within " + std::to_string(limit) + " symbols; lengthen x");
  }
  return *out;
}

namespace {

// Largest n with rho(sigma^j a, sigma^j b) < eps for every j < n, given the
// first disagreement g (nullopt: none). rho(sigma^j) = 2^-(g - j).
bool bowen_ok(std::optional<std::uint64_t> g, std::size_t p, const Rational& eps) {
  if (p == 0 || !g) return true;
  if (*g < p) return false;  // they differ inside the window itself
  return dyadic(*g - (p - 1)) < eps;
}

std::optional<std::uint64_t> first_difference_with(const Point& y, const Source& x, std::size_t need,
                                                   bool& short_prefix) {
  short_prefix = false;
  if (const auto* pt = std::get_if<Point>(&x)) return first_difference(y, *pt);
  const auto& w = std::get<Word>(x);
  for (std::size_t i = 1; i <= w.size(); ++i) {
    if (y.at(i) != w[i - 1]) return i;
  }
  // no disagreement seen; position |w|+1 is the best bound available
  if (w.size() < need) short_prefix = true;
  return w.size() + 1;
}

}  // namespace

CheckResult check_closing(const ShiftSystem& system, const ClosingCertificate& c) {
  CheckResult r;
  auto fail = [&](std::string s) { r.failures.push_back(std::move(s)); };
  if (!(c.N <= c.p && c.p <= c.q)) fail("N <= p <= q violated");
  if (!(Rational(c.q) <= (1 + c.epsilon) * c.p)) fail("q > (1+eps) p");
  if (!c.y.is_periodic()) fail("y is not purely periodic");
  if (c.y.period_length() == 0 || c.q % c.y.period_length() != 0) fail("sigma^q(y) != y");
  // rho(sigma^j y, sigma^j x) < eps for j < p, straight from the metric
  bool short_prefix = false;
  std::size_t need = c.p;
  while (dyadic(need - c.p + 1) >= c.epsilon) ++need;
  auto g = first_difference_with(c.y, c.x, need, short_prefix);
  if (short_prefix) fail("x prefix too short to certify the Bowen ball");
  if (!bowen_ok(g, c.p, c.epsilon)) fail("y not in B(x, p, eps)");
  if (!system.contains_periodic(c.y.period())) fail("y is not admissible");
  return r;
}

Point sft_close(const LabelledGraph& g, std::span<const Symbol> w) {
  if (w.empty()) throw Error(ErrorCode::InvalidInput, "empty word");
  auto count = g.vertex_count();
  if (!count) throw Error(ErrorCode::InvalidInput, "sft_close needs a finite graph");
  std::optional<Word> best;
  for (Vertex s = 0; s < *count; ++s) {
    for (Vertex end : word_walk(g, s, w)) {
      auto c = shortest_connector(g, end, s, *count);
      if (c && (!best || c->size() < best->size())) best = c;
    }
  }
  if (!best) throw Error(ErrorCode::NotReadable, format_word(w) + " is not readable");
  Word loop(w.begin(), w.end());
  loop.insert(loop.end(), best->begin(), best->end());
  return Point::periodic(std::move(loop));
}

GraphPtr root_graph(const ShiftSystem& system) {
  switch (system.kind()) {
    case SystemKind::SGap: return make_gamma_s(static_cast<const SGapSystem&>(system).gaps());
    case SystemKind::Beta: return make_gamma_beta(static_cast<const BetaSystem&>(system).hat());
    case SystemKind::Coded: return make_finite_graph(static_cast<const CodedSystem&>(system).graph());
    default:
      throw Error(ErrorCode::InvalidInput, std::string(to_string(system.kind())) + " is not root-coded here");
  }
}

Word root_loop(const LabelledGraph& g, const Point& y) {
  if (!y.is_periodic()) throw Error(ErrorCode::InvalidInput, "loop points must be purely periodic");
  const Word u = y.period();
  Word w;
  for (int r = 1; r <= 64; ++r) {
    w.insert(w.end(), u.begin(), u.end());
    auto ends = word_walk(g, g.root(), w);
    if (std::find(ends.begin(), ends.end(), g.root()) != ends.end()) return w;
    if (ends.empty()) break;
  }
  throw Error(ErrorCode::InvalidInput, format_point(y) + " is not a loop through the root");
}

namespace {

Word repeat_word(const Word& w, std::size_t times) {
  Word out;
  out.reserve(w.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

// Largest multiple of d that is <= n.
std::size_t floor_multiple(std::size_t n, std::size_t d) { return n / d * d; }

}  // namespace

LinkCertificate link(const ShiftSystem& system, const Point& y1, const Point& y2, const Rational& lambda,
                     const Rational& eps, const LinkOptions& opts) {
  check_eps(eps);
  if (lambda < 0 || lambda > 1) throw Error(ErrorCode::InvalidInput, "lambda must lie in [0, 1]");
  const std::size_t D = std::max<std::size_t>(1, opts.divisor);
  auto g = root_graph(system);
  const Word w1 = root_loop(*g, y1), w2 = root_loop(*g, y2);
  const std::size_t A = seam_margin(eps);

  LinkCertificate c;
  c.y1 = y1;
  c.y2 = y2;
  c.lambda = lambda;
  c.epsilon = eps;
  c.divisor = D;

  auto finish_link = [&](LinkCertificate& cert) {
    auto check = check_link(system, cert);
    if (!check.ok()) throw std::logic_error("link certificate rejected: " + check.summary());
    return cert;
  };

  if (lambda == 0 || lambda == 1) {
    // a pure loop, repeated until its length is a multiple of the divisor
    const Word& w = lambda == 1 ? w1 : w2;
    std::size_t reps = D / std::gcd(D, w.size());
    std::size_t len = reps * w.size();
    c.degenerate = true;
    c.z = lambda == 1 ? y1 : y2;
    if (lambda == 1) {
      c.a = reps;
      c.p1 = c.q1 = c.q2 = len;
    } else {
      c.b = reps;
      c.p2 = c.q2 = len;
    }
    return finish_link(c);
  }

  // p_i: the largest multiple of the divisor leaving a(eps) - 1 symbols of
  // agreement slack inside its block.
  auto p_of = [&](std::size_t block) -> std::size_t {
    if (block + 1 <= A) return 0;
    return floor_multiple(block + 1 - A, D);
  };
  auto seam_ok = [&](std::size_t block, std::size_t p) { return p > 0 && within(block, p, eps); };

  std::size_t a_max = opts.a_max;
  if (a_max == 0) {
    // 4/(eps |w1|) repetitions, enlarged so the seam margin and divisor fit
    Rational need = (4 + (1 + eps) * (A + D)) / (eps * w1.size());
    // the second block needs its own seam slack, and p1 must outweigh it
    // (with lambda + eps >= 1 only the lower ratio bound binds)
    Rational odds = lambda + eps < 1 ? Rational((lambda + eps) / (1 - lambda - eps)) : Rational((lambda - eps) / (1 - lambda + eps));
    if (odds > 0) need = max(need, (4 + (1 + eps) * (A + D) / eps) * odds / w1.size());
    a_max = (ceil(need).get_ui() + 1) * D;
  }
  const Rational hi_ratio = lambda + eps, lo_ratio = lambda - eps;
  for (std::size_t a = 1; a <= a_max; ++a) {
    const std::size_t q1 = a * w1.size();
    const std::size_t p1 = p_of(q1);
    if (!seam_ok(q1, p1)) continue;
    // p1/(p1+p2) in [lambda - eps, lambda + eps] bounds p2 on both sides
    Rational p2_min = hi_ratio >= 1 ? Rational(0) : Rational(p1) * (1 - hi_ratio) / hi_ratio;
    std::optional<Rational> p2_max;
    if (lo_ratio > 0) p2_max = Rational(p1) * (1 - lo_ratio) / lo_ratio;
    std::size_t b_start = 1;
    {
      BigInt lo_b = floor((p2_min + A - 1) / w2.size());
      if (lo_b > 2) b_start = lo_b.get_ui() - 1;
    }
    std::size_t b_end;
    if (p2_max) {
      b_end = ceil((*p2_max + A - 1 + D) / w2.size()).get_ui() + 1;
    } else {
      b_end = b_start + ceil((1 + eps) * (A + D) / (eps * w2.size())).get_ui() + 2;
    }
    for (std::size_t b = b_start; b <= b_end; ++b) {
      const std::size_t r = b * w2.size();
      const std::size_t p2 = p_of(r);
      if (!seam_ok(r, p2)) continue;
      Rational ratio(p1, p1 + p2);
      ratio.canonicalize();
      if (ratio < lo_ratio || ratio > hi_ratio) continue;
      Word block = repeat_word(w1, a);
      Word tail = repeat_word(w2, b);
      block.insert(block.end(), tail.begin(), tail.end());
      c.a = a;
      c.b = b;
      c.q1 = q1;
      c.q2 = q1 + r;
      c.p1 = p1;
      c.p2 = p2;
      c.z = Point::periodic(std::move(block));
      return finish_link(c);
    }
  }
  throw Error(ErrorCode::NoCountsInRange, "no repetition counts with a <= " + std::to_string(a_max));
}

CheckResult check_link(const ShiftSystem& system, const LinkCertificate& c) {
  CheckResult r;
  auto fail = [&](std::string s) { r.failures.push_back(std::move(s)); };
  const Rational& eps = c.epsilon;
  if (!c.z.is_periodic()) fail("z is not purely periodic");
  if (c.q2 == 0 || c.q2 % c.z.period_length() != 0) fail("sigma^q2(z) != z");
  if (c.q1 > c.q2) fail("q1 > q2");
  if (c.p1 + c.p2 == 0) {
    fail("p1 + p2 = 0");
  } else {
    Rational ratio(c.p1, c.p1 + c.p2);
    ratio.canonicalize();
    if (ratio < c.lambda - eps || ratio > c.lambda + eps) fail("p1/(p1+p2) outside [lambda-eps, lambda+eps]");
  }
  if (!(c.p1 <= c.q1 && Rational(c.q1) <= (1 + eps) * c.p1)) fail("p1 <= q1 <= (1+eps) p1 violated");
  const std::size_t r2 = c.q2 - std::min(c.q1, c.q2);
  if (!(c.p2 <= r2 && Rational(r2) <= (1 + eps) * c.p2)) fail("p2 <= q2-q1 <= (1+eps) p2 violated");
  if (!bowen_ok(first_difference(c.z, c.y1), c.p1, eps)) fail("z not in B(y1, p1, eps)");
  if (!bowen_ok(first_difference(shift(c.z, c.q1), c.y2), c.p2, eps)) fail("sigma^q1(z) not in B(y2, p2, eps)");
  if (c.divisor > 1 && (c.p1 % c.divisor != 0 || c.p2 % c.divisor != 0)) fail("divisor does not divide p1, p2");
  if (!system.contains_periodic(c.z.period())) fail("z is not admissible");
  return r;
}

FinMeasure combo_measure(const Combo& parts) {
  std::vector<std::pair<Rational, FinMeasure>> mix;
  for (const auto& [lambda, p] : parts) mix.emplace_back(lambda, co_measure(p));
  return convex(mix);
}

namespace {

ApproxResult approx_once(const ShiftSystem& system, const Combo& parts, const Rational& eps, unsigned tighten) {
  ApproxResult out;
  out.tightening = tighten;
  out.z = parts.front().second;
  Rational total = parts.front().first;
  for (std::size_t j = 1; j < parts.size(); ++j) {
    const Rational next_total = total + parts[j].first;
    ApproxStage stage;
    stage.tolerance = eps / (Rational(tighten) * Rational(BigInt(1) << static_cast<unsigned>(j + 1)));
    stage.link = link(system, out.z, parts[j].second, total / next_total, stage.tolerance);
    out.z = stage.link.z;
    Combo partial;
    for (std::size_t i = 0; i <= j; ++i) partial.emplace_back(parts[i].first / next_total, parts[i].second);
    stage.distance = dbar(co_measure(out.z), combo_measure(partial)).value;
    out.trace.push_back(std::move(stage));
    total = next_total;
  }
  out.distance = out.trace.empty() ? Rational(0) : out.trace.back().distance;
  return out;
}

}  // namespace

ApproxResult approx_convex(const ShiftSystem& system, const Combo& input, const Rational& eps) {
  check_eps(eps);
  Combo parts;
  Rational total = 0;
  for (const auto& [lambda, p] : input) {
    if (lambda < 0 || lambda > 1) throw Error(ErrorCode::InvalidInput, "weights must lie in [0, 1]");
    total += lambda;
    if (lambda > 0) parts.emplace_back(lambda, p);
  }
  if (total != 1) throw Error(ErrorCode::WeightsNotNormalized, "weights sum to " + to_string(total));
  auto g = root_graph(system);
  for (const auto& [lambda, p] : parts) root_loop(*g, p);
  ApproxResult best;
  for (unsigned tighten : {1u, 3u, 9u}) {
    best = approx_once(system, parts, eps, tighten);
    if (best.distance < eps) return best;
  }
  return best;  // caller sees distance >= eps
}

// ---------------------------------------------------------------------------
// generic points

namespace {

Combo mix_combos(const Combo& a, const Combo& b, const Rational& t) {
  std::map<Point, Rational> merged;
  for (const auto& [l, p] : a) merged[p] += (1 - t) * l;
  for (const auto& [l, p] : b) merged[p] += t * l;
  Combo out;
  for (auto& [p, l] : merged) {
    if (l > 0) out.emplace_back(l, p);
  }
  return out;
}

std::vector<std::size_t> checkpoints_for(std::size_t L, std::size_t min_n) {
  std::vector<std::size_t> out;
  // L / sqrt(2)^i, rounded down
  double n = static_cast<double>(L);
  while (n >= static_cast<double>(min_n)) {
    out.push_back(static_cast<std::size_t>(n));
    n /= 1.4142135623730951;
  }
  std::reverse(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct TargetStream {
  // desired targets cycle; moves larger than eps_n are cut into steps
  const std::vector<Combo>& desired;
  bool cycle;
  std::size_t next_index = 1;
  Combo current;

  std::pair<Combo, std::size_t> advance(const Rational& eps_n) {
    std::size_t want = cycle ? next_index % desired.size() : std::min(next_index, desired.size() - 1);
    const Combo& goal = desired[want];
    Rational d = dbar(combo_measure(current), combo_measure(goal)).value;
    if (d <= eps_n) {
      current = goal;
      ++next_index;
    } else {
      current = mix_combos(current, goal, eps_n);
    }
    return {current, want};
  }
};

GenericReport run_generic(const ShiftSystem& system, const std::vector<Combo>& targets, bool cycle, std::size_t L,
                          const GenericOptions& opts) {
  if (targets.empty()) throw Error(ErrorCode::InvalidInput, "no targets");
  if (L == 0) throw Error(ErrorCode::InvalidInput, "horizon must be positive");
  GenericReport rep;
  const std::size_t need = L + opts.depth;

  auto delta = [](std::size_t n) { return dyadic(n + 5); };
  auto approximant = [&](const Combo& c, std::size_t n) { return approx_convex(system, c, delta(n)); };

  // stage 0: z_0 = x_0, p1 = q1 = p2 = M_0, q2 = 2 M_0
  auto x0 = approximant(targets.front(), 0);
  Point z = x0.z;
  GenericStage s0;
  s0.M = z.period_length();
  s0.N = 0;
  s0.p1 = s0.q1 = s0.p2 = s0.M;
  s0.q2 = 2 * s0.M;
  s0.approx_distance = x0.distance;
  rep.stages.push_back(s0);
  if (L < s0.q2) {
    throw Error(ErrorCode::HorizonTooSmall,
                "horizon " + std::to_string(L) + " below the stage-0 block length " + std::to_string(s0.q2));
  }

  TargetStream stream{targets, cycle, 1, targets.front()};
  std::size_t certified = 0;
  for (std::size_t n = 1;; ++n) {
    const Rational eps_n = opts.eps0 / Rational(BigInt(1) << static_cast<unsigned>(n));
    auto [combo, want] = targets.size() == 1 ? std::pair<Combo, std::size_t>{targets.front(), 0}
                                             : stream.advance(eps_n);
    auto xn = approximant(combo, n);
    const std::size_t M = xn.z.period_length();
    const std::size_t prev_q2 = rep.stages.back().q2;
    BigInt N = (BigInt(1) << static_cast<unsigned>(2 * n)) * BigInt(M) * BigInt(prev_q2);
    if (N >= BigInt(need)) {
      // every later p1 is a positive multiple of N_n, so the limit point
      // shares its first N_n symbols with z_{n-1}^inf
      certified = N.fits_ulong_p() ? N.get_ui() : std::numeric_limits<std::size_t>::max();
      break;
    }
    if (N > BigInt(opts.max_word)) throw Error(ErrorCode::LimitExceeded, "stage block beyond word guard");
    const Rational small = eps_n / Rational(BigInt(1) << static_cast<unsigned>(n));  // 2^-n eps_n
    const Rational link_eps = small / 2;
    // p2/p1 >= R makes (p1(1 + 2^-n eps_n) + 2^n M_n)/p2 <= 2^-n, as 2^n M_n <= 2^-n p1
    const Rational two_n(BigInt(1) << static_cast<unsigned>(n));
    const Rational R = two_n * (1 + small + 1 / two_n);
    const Rational lambda = 1 / (1 + R) - link_eps;
    LinkOptions lo;
    lo.divisor = N.get_ui();
    auto cert = link(system, z, xn.z, lambda, link_eps, lo);
    Rational lhs = (Rational(cert.p1) * (1 + small) + two_n * M) / Rational(cert.p2);
    if (lhs > 1 / two_n) throw std::logic_error("block growth condition failed");
    GenericStage st;
    st.n = n;
    st.target = want;
    st.M = M;
    st.N = N;
    st.p1 = cert.p1;
    st.q1 = cert.q1;
    st.p2 = cert.p2;
    st.q2 = cert.q2;
    st.approx_distance = xn.distance;
    rep.stages.push_back(st);
    z = cert.z;
    if (cert.q2 > opts.max_word) throw Error(ErrorCode::LimitExceeded, "stage block beyond word guard");
  }
  rep.last_stage = rep.stages.size() - 1;
  rep.certified = certified;
  rep.prefix = z.prefix(need);

  // checkpoint distances to the target of the stage whose block holds n_c
  std::map<std::size_t, FinMeasure> target_cache;
  for (std::size_t nc : checkpoints_for(L, opts.min_checkpoint)) {
    std::size_t stage = rep.last_stage;
    for (std::size_t s = 0; s < rep.stages.size(); ++s) {
      if (rep.stages[s].q2 >= nc) {
        stage = s;
        break;
      }
    }
    std::size_t target = rep.stages[stage].target;
    auto it = target_cache.find(target);
    if (it == target_cache.end()) {
      it = target_cache.emplace(target, combo_measure(targets[target]).truncate(opts.depth)).first;
    }
    auto emp = empirical(std::span<const Symbol>(rep.prefix), nc, opts.depth);
    auto d = dbar(emp, it->second);
    rep.checkpoints.push_back({nc, d.lo, d.hi, stage, target});
  }
  return rep;
}

}  // namespace

GenericReport generic_prefix(const ShiftSystem& system, const std::vector<Combo>& targets, std::size_t L,
                             const GenericOptions& opts) {
  return run_generic(system, targets, false, L, opts);
}

OscillationReport oscillation_prefix(const ShiftSystem& system, const std::vector<Combo>& V, std::size_t L,
                                     const GenericOptions& opts) {
  OscillationReport out;
  out.generic = run_generic(system, V, V.size() > 1, L, opts);
  const auto& prefix = out.generic.prefix;
  // recompute against every member of V, not only the active target
  for (std::size_t i = 0; i < V.size(); ++i) {
    auto target = combo_measure(V[i]).truncate(opts.depth);
    std::optional<Rational> best;
    for (const auto& cp : out.generic.checkpoints) {
      if (cp.n + opts.depth > prefix.size()) continue;
      auto d = dbar(empirical(std::span<const Symbol>(prefix), cp.n, opts.depth), target).hi;
      if (!best || d < *best) best = d;
    }
    out.min_hi.push_back(best.value_or(Rational(1)));
  }
  return out;
}

}  // namespace shiftlab
