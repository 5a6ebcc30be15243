#include "shiftlab/graphview.hpp"

#include "shiftlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace shiftlab {

const char* to_string(GraphFamily f) noexcept {
  switch (f) {
    case GraphFamily::GammaS: return "GAMMA_S";
    case GraphFamily::GammaBeta: return "GAMMA_BETA";
    case GraphFamily::GammaPrime: return "GAMMA_PRIME";
    case GraphFamily::GammaDoublePrime: return "GAMMA_DOUBLEPRIME";
    case GraphFamily::GammaEnt: return "GAMMA_ENT";
    case GraphFamily::FiniteSft: return "FINITE_SFT";
    case GraphFamily::Custom: return "CUSTOM";
  }
  return "UNKNOWN";
}

std::vector<Vertex> LabelledGraph::start_candidates(std::span<const Symbol> w) const {
  std::size_t n = w.size();
  if (auto count = vertex_count()) n = *count - 1;
  std::vector<Vertex> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = i;
  return out;
}

namespace {

constexpr std::size_t kOmegaCache = std::size_t{1} << 16;

class GammaS final : public LabelledGraph {
 public:
  explicit GammaS(GapSet s) : s_(std::move(s)) {}
  GraphFamily family() const noexcept override { return GraphFamily::GammaS; }

  std::vector<LabelledEdge> out_edges(Vertex v) const override {
    std::vector<LabelledEdge> e{{v + 1, 0}};
    if (s_.contains(v)) e.push_back({0, 1});
    return e;
  }

  // 0^j 1 ... read from v_i needs i + j in S, and i may be deeper than |w|.
  std::vector<Vertex> start_candidates(std::span<const Symbol> w) const override {
    auto out = LabelledGraph::start_candidates(w);
    auto first_one = std::find(w.begin(), w.end(), Symbol{1});
    if (first_one != w.end()) {
      auto j = static_cast<std::uint64_t>(first_one - w.begin());
      if (auto s = s_.next_at_least(j); s && *s - j > w.size()) out.push_back(*s - j);
    }
    return out;
  }

 private:
  GapSet s_;
};

class GammaBeta final : public LabelledGraph {
 public:
  explicit GammaBeta(BetaHat h) : h_(std::move(h)) {}
  GraphFamily family() const noexcept override { return GraphFamily::GammaBeta; }

  std::vector<LabelledEdge> out_edges(Vertex v) const override {
    Symbol d = h_.digit(v + 1);
    std::vector<LabelledEdge> e{{v + 1, d}};
    for (Symbol a = 0; a < d; ++a) e.push_back({0, a});
    return e;
  }

  // Follower sets are nested under v_0 by the Parry condition.
  std::vector<Vertex> start_candidates(std::span<const Symbol>) const override { return {0}; }

 private:
  BetaHat h_;
};

// v_i = 2i, u_i = 2i - 1
class GammaPrimeLike final : public LabelledGraph {
 public:
  GammaPrimeLike(std::optional<Substitution> omega) : prime_(omega.has_value()) {
    if (omega) {
      omega_ = omega->prefix(kOmegaCache);
      for (Symbol s : omega_) {
        if (s > 1) throw Error(ErrorCode::InvalidInput, "omega must be binary");
      }
    }
  }

  GraphFamily family() const noexcept override {
    return prime_ ? GraphFamily::GammaPrime : GraphFamily::GammaDoublePrime;
  }

  std::vector<LabelledEdge> out_edges(Vertex v) const override {
    const Symbol back = prime_ ? 2 : 1;
    if (v == 0) {
      std::vector<LabelledEdge> e{{1, forward_label(1)}};
      if (prime_) e.push_back({0, 2});
      return e;
    }
    if (v % 2 == 0) return {{v - 2, back}};
    const Vertex i = (v + 1) / 2;  // u_i
    return {{v + 2, forward_label(i + 1)}, {2 * (i - 1), back}};
  }

  std::string vertex_name(Vertex v) const override {
    return v % 2 == 0 ? "v" + std::to_string(v / 2) : "u" + std::to_string((v + 1) / 2);
  }

  std::vector<Vertex> start_candidates(std::span<const Symbol> w) const override {
    std::vector<Vertex> out;
    for (Vertex v = 0; v <= 2 * w.size() + 1; ++v) out.push_back(v);
    if (prime_) {
      // a leading omega stretch may sit anywhere along the u-chain
      auto end = std::find(w.begin(), w.end(), Symbol{2});
      if (end != w.begin()) {
        auto it = std::search(omega_.begin(), omega_.end(), w.begin(), end);
        if (it != omega_.end()) {
          auto a = static_cast<Vertex>(it - omega_.begin());  // start at u_a (v_0 when a = 0)
          if (a > 0) out.push_back(2 * a - 1);
        }
      }
    }
    return out;
  }

 private:
  Symbol forward_label(Vertex i) const {
    if (!prime_) return 0;
    if (i == 0 || i > omega_.size()) throw Error(ErrorCode::LimitExceeded, "omega prefix exhausted");
    return omega_[i - 1];
  }

  bool prime_;
  Word omega_;
};

class GammaEnt final : public LabelledGraph {
 public:
  explicit GammaEnt(const Substitution& omega) : omega_(omega.prefix(kOmegaCache)) {}
  GraphFamily family() const noexcept override { return GraphFamily::GammaEnt; }

  std::vector<LabelledEdge> out_edges(Vertex v) const override {
    if (v >= omega_.size()) throw Error(ErrorCode::LimitExceeded, "omega prefix exhausted");
    std::vector<LabelledEdge> e{{v + 1, omega_[v]}};
    if (v >= 1) e.push_back({0, 2});
    return e;
  }

 private:
  Word omega_;
};

class FiniteGraph final : public LabelledGraph {
 public:
  FiniteGraph(FiniteGraphData data, GraphFamily family) : data_(std::move(data)), family_(family) {
    if (data_.vertices == 0) throw Error(ErrorCode::InvalidInput, "graph has no vertices");
    if (data_.root >= data_.vertices) throw Error(ErrorCode::InvalidInput, "root out of range");
    adj_.resize(data_.vertices);
    for (const auto& e : data_.edges) {
      if (e.from >= data_.vertices || e.to >= data_.vertices) {
        throw Error(ErrorCode::InvalidInput, "edge endpoint out of range");
      }
      adj_[e.from].push_back({e.to, e.label});
    }
  }

  GraphFamily family() const noexcept override { return family_; }
  Vertex root() const noexcept override { return data_.root; }
  std::optional<std::size_t> vertex_count() const noexcept override { return data_.vertices; }
  std::vector<LabelledEdge> out_edges(Vertex v) const override {
    if (v >= adj_.size()) return {};
    return adj_[v];
  }
  const FiniteGraphData& data() const noexcept { return data_; }

 private:
  FiniteGraphData data_;
  GraphFamily family_;
  std::vector<std::vector<LabelledEdge>> adj_;
};

}  // namespace

GraphPtr make_gamma_s(GapSet s) { return std::make_shared<GammaS>(std::move(s)); }
GraphPtr make_gamma_beta(BetaHat dhat) { return std::make_shared<GammaBeta>(std::move(dhat)); }
GraphPtr make_gamma_prime(Substitution omega) {
  return std::make_shared<GammaPrimeLike>(std::move(omega));
}
GraphPtr make_gamma_double_prime() { return std::make_shared<GammaPrimeLike>(std::nullopt); }
GraphPtr make_gamma_ent(Substitution omega) { return std::make_shared<GammaEnt>(omega); }

GraphPtr make_finite_graph(FiniteGraphData data, GraphFamily family) {
  return std::make_shared<FiniteGraph>(std::move(data), family);
}

GraphPtr make_sft_graph(const SftSystem& sft) {
  const std::size_t k = *sft.alphabet_size();
  std::size_t width = 0;
  for (const auto& f : sft.forbidden()) width = std::max(width, f.size() - 1);
  double states = std::pow(static_cast<double>(k), static_cast<double>(width));
  if (states > 65536) throw Error(ErrorCode::LimitExceeded, "SFT presentation too large");

  std::vector<Word> words{Word{}};
  for (std::size_t d = 0; d < width; ++d) {
    std::vector<Word> next;
    for (const auto& w : words) {
      for (Symbol a = 0; a < k; ++a) {
        Word x = w;
        x.push_back(a);
        if (sft.contains(x)) next.push_back(std::move(x));
      }
    }
    words = std::move(next);
  }
  if (words.empty()) throw Error(ErrorCode::InvalidInput, "SFT language is empty");
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);
  FiniteGraphData data;
  data.vertices = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (Symbol a = 0; a < k; ++a) {
      Word x = words[i];
      x.push_back(a);
      if (!sft.contains(x)) continue;
      Word tail(x.begin() + 1, x.end());
      data.edges.push_back({i, index.at(tail), a});
    }
  }
  Word zeros(width, 0);
  if (auto it = index.find(zeros); it != index.end()) data.root = it->second;
  return make_finite_graph(std::move(data), GraphFamily::FiniteSft);
}

FiniteGraphData finite_data(const LabelledGraph& g) {
  auto count = g.vertex_count();
  if (!count) throw Error(ErrorCode::InvalidInput, "graph is not finite");
  FiniteGraphData data;
  data.vertices = *count;
  data.root = g.root();
  for (Vertex v = 0; v < *count; ++v) {
    for (const auto& e : g.out_edges(v)) data.edges.push_back({v, e.target, e.label});
  }
  return data;
}

std::vector<Vertex> word_walk(const LabelledGraph& g, Vertex start, std::span<const Symbol> w) {
  std::set<Vertex> cur{start};
  for (Symbol s : w) {
    std::set<Vertex> next;
    for (Vertex v : cur) {
      for (const auto& e : g.out_edges(v)) {
        if (e.label == s) next.insert(e.target);
      }
    }
    if (next.empty()) return {};
    cur = std::move(next);
  }
  return {cur.begin(), cur.end()};
}

std::optional<std::vector<Vertex>> walk_path(const LabelledGraph& g, Vertex start,
                                             std::span<const Symbol> w) {
  // layer k maps each reachable vertex to a predecessor in layer k-1
  std::vector<std::map<Vertex, Vertex>> layers(w.size() + 1);
  layers[0].emplace(start, start);
  for (std::size_t k = 0; k < w.size(); ++k) {
    for (const auto& [v, _] : layers[k]) {
      for (const auto& e : g.out_edges(v)) {
        if (e.label == w[k]) layers[k + 1].emplace(e.target, v);
      }
    }
    if (layers[k + 1].empty()) return std::nullopt;
  }
  std::vector<Vertex> path(w.size() + 1);
  Vertex v = layers[w.size()].begin()->first;
  for (std::size_t k = w.size() + 1; k-- > 0;) {
    path[k] = v;
    v = layers[k].at(v);
  }
  return path;
}

bool readable(const LabelledGraph& g, std::span<const Symbol> w) {
  for (Vertex s : g.start_candidates(w)) {
    if (!word_walk(g, s, w).empty()) return true;
  }
  return false;
}

bool right_resolving_check(const LabelledGraph& g, Vertex vertex_bound) {
  Vertex last = vertex_bound;
  if (auto count = g.vertex_count()) last = std::min<Vertex>(last, *count - 1);
  for (Vertex v = 0; v <= last; ++v) {
    std::set<Symbol> labels;
    for (const auto& e : g.out_edges(v)) {
      if (!labels.insert(e.label).second) return false;
    }
  }
  return true;
}

namespace {

// Vertices within `depth` steps of the root, their edges, and their distance
// back to the root inside that window.
struct Window {
  std::unordered_map<Vertex, std::vector<LabelledEdge>> adj;
  std::unordered_map<Vertex, std::size_t> to_root;
};

Window explore(const LabelledGraph& g, std::size_t depth) {
  Window win;
  std::vector<Vertex> frontier{g.root()};
  win.adj.emplace(g.root(), g.out_edges(g.root()));
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Vertex> next;
    for (Vertex v : frontier) {
      for (const auto& e : win.adj.at(v)) {
        if (win.adj.count(e.target)) continue;
        win.adj.emplace(e.target, d + 1 < depth ? g.out_edges(e.target) : std::vector<LabelledEdge>{});
        next.push_back(e.target);
      }
    }
    frontier = std::move(next);
  }
  std::unordered_map<Vertex, std::vector<Vertex>> rev;
  for (const auto& [v, edges] : win.adj) {
    for (const auto& e : edges) rev[e.target].push_back(v);
  }
  std::deque<Vertex> queue{g.root()};
  win.to_root[g.root()] = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex u : rev[v]) {
      if (win.to_root.count(u)) continue;
      win.to_root[u] = win.to_root[v] + 1;
      queue.push_back(u);
    }
  }
  return win;
}

struct ByLengthThenLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace

std::vector<Word> loops_through(const LabelledGraph& g, std::size_t max_len, std::size_t cap) {
  if (max_len > kMaxLoopLength) {
    throw Error(ErrorCode::LimitExceeded,
                "loop length " + std::to_string(max_len) + " above guard " +
                    std::to_string(kMaxLoopLength));
  }
  Window win = explore(g, max_len);
  std::set<Word, ByLengthThenLex> found;
  std::size_t visits = 0;
  Word label;
  const Vertex root = g.root();

  auto dfs = [&](auto&& self, Vertex v) -> void {
    for (const auto& e : win.adj.at(v)) {
      auto d = win.to_root.find(e.target);
      if (d == win.to_root.end() || label.size() + 1 + d->second > max_len) continue;
      if (++visits > 16 * cap) throw Error(ErrorCode::LimitExceeded, "loop enumeration too large");
      label.push_back(e.label);
      if (e.target == root) {
        found.insert(label);
        if (found.size() > cap) throw Error(ErrorCode::LimitExceeded, "too many loop labels");
      }
      self(self, e.target);
      label.pop_back();
    }
  };
  dfs(dfs, root);
  return {found.begin(), found.end()};
}

std::optional<Word> shortest_connector(const LabelledGraph& g, Vertex from, Vertex to,
                                       std::size_t max_len) {
  if (from == to) return Word{};
  std::map<Vertex, std::pair<Vertex, Symbol>> parent;
  parent.emplace(from, std::make_pair(from, Symbol{0}));
  std::vector<Vertex> frontier{from};
  for (std::size_t d = 0; d < max_len && !frontier.empty(); ++d) {
    std::vector<Vertex> next;
    for (Vertex v : frontier) {
      for (const auto& e : g.out_edges(v)) {
        if (parent.count(e.target)) continue;
        parent.emplace(e.target, std::make_pair(v, e.label));
        if (e.target == to) {
          Word w;
          for (Vertex x = to; x != from; x = parent.at(x).first) w.push_back(parent.at(x).second);
          std::reverse(w.begin(), w.end());
          return w;
        }
        next.push_back(e.target);
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

double log_big(const BigInt& x) {
  if (x <= 0) return std::numeric_limits<double>::quiet_NaN();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

EntropyCounts return_counts(const LabelledGraph& g, std::size_t n_max) {
  if (n_max > kMaxReturnSteps) {
    throw Error(ErrorCode::LimitExceeded, "nMax above guard " + std::to_string(kMaxReturnSteps));
  }
  const Vertex root = g.root();
  EntropyCounts out;
  out.r.assign(n_max + 1, BigInt(0));
  out.l.assign(n_max + 1, BigInt(0));
  out.r[0] = 1;

  std::map<Vertex, std::vector<LabelledEdge>> adj;
  auto edges = [&](Vertex v) -> const std::vector<LabelledEdge>& {
    auto it = adj.find(v);
    if (it == adj.end()) it = adj.emplace(v, g.out_edges(v)).first;
    return it->second;
  };

  std::map<Vertex, BigInt> all{{root, BigInt(1)}};    // all paths from the root
  std::map<Vertex, BigInt> first{{root, BigInt(1)}};  // paths not yet back at the root
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::map<Vertex, BigInt> a, f;
    for (const auto& [v, c] : all) {
      for (const auto& e : edges(v)) a[e.target] += c;
    }
    for (const auto& [v, c] : first) {
      for (const auto& e : edges(v)) {
        if (e.target == root) {
          out.l[n] += c;
        } else {
          f[e.target] += c;
        }
      }
    }
    if (auto it = a.find(root); it != a.end()) out.r[n] = it->second;
    all = std::move(a);
    first = std::move(f);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.est_r.assign(n_max + 1, nan);
  out.est_l.assign(n_max + 1, nan);
  double best_l = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (out.r[n] > 0) out.est_r[n] = log_big(out.r[n]) / static_cast<double>(n);
    if (out.l[n] > 0) {
      out.est_l[n] = log_big(out.l[n]) / static_cast<double>(n);
      best_l = std::max(best_l, out.est_l[n]);
    }
  }
  if (n_max >= 1) {
    double terminal = out.est_r[n_max];
    out.spr_margin = std::isinf(best_l) ? terminal : terminal - best_l;
  }
  return out;
}

}  // namespace shiftlab
