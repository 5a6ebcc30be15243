#pragma once

// Countable labelled graphs, explored lazily from their root.

#include "shiftlab/beta.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/seqcore.hpp"
#include "shiftlab/systems.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shiftlab {

enum class GraphFamily { GammaS, GammaBeta, GammaPrime, GammaDoublePrime, GammaEnt, FiniteSft, Custom };

const char* to_string(GraphFamily f) noexcept;

using Vertex = std::uint64_t;

struct LabelledEdge {
  Vertex target = 0;
  Symbol label = 0;
};

class LabelledGraph {
 public:
  virtual ~LabelledGraph() = default;

  virtual GraphFamily family() const noexcept = 0;
  virtual std::vector<LabelledEdge> out_edges(Vertex v) const = 0;
  virtual Vertex root() const noexcept { return 0; }
  /// Number of vertices for finite graphs (ids 0..n-1).
  virtual std::optional<std::size_t> vertex_count() const noexcept { return std::nullopt; }
  virtual std::string vertex_name(Vertex v) const { return "v" + std::to_string(v); }

  /// Start vertices worth trying when reading w anywhere in the graph. The
  /// default is every vertex of id <= |w| (all of them for finite graphs).
  virtual std::vector<Vertex> start_candidates(std::span<const Symbol> w) const;
};

using GraphPtr = std::shared_ptr<const LabelledGraph>;

/// v_i -> v_{i+1} labelled 0, and v_i -> v_0 labelled 1 when i is in S.
GraphPtr make_gamma_s(GapSet s);
/// Forward edge v_i -> v_{i+1} labelled dhat_{i+1}; back edges v_i -> v_0
/// labelled 0 .. dhat_{i+1}-1.
GraphPtr make_gamma_beta(BetaHat dhat);
/// Vertex ids: v_i = 2i, u_i = 2i - 1.
GraphPtr make_gamma_prime(Substitution omega = Substitution::fibonacci());
GraphPtr make_gamma_double_prime();
/// Chain v_{i-1} -> v_i labelled omega_i, every v_i (i >= 1) steps back to v_0 with label 2.
GraphPtr make_gamma_ent(Substitution omega = Substitution::fibonacci());
/// Finite graph given as data; `family` is FiniteSft or Custom.
GraphPtr make_finite_graph(FiniteGraphData data, GraphFamily family = GraphFamily::Custom);
/// Higher-block presentation of an SFT: vertices are the admissible words of
/// length (longest forbidden word - 1).
GraphPtr make_sft_graph(const SftSystem& sft);
/// Edge data of a finite graph (vertex_count() must be set).
FiniteGraphData finite_data(const LabelledGraph& g);

/// Vertices reached from `start` along paths labelled w (empty when not readable).
std::vector<Vertex> word_walk(const LabelledGraph& g, Vertex start, std::span<const Symbol> w);
/// One path labelled w from `start`, as the list of visited vertices (|w|+1 entries).
std::optional<std::vector<Vertex>> walk_path(const LabelledGraph& g, Vertex start,
                                             std::span<const Symbol> w);
/// w readable from some start candidate.
bool readable(const LabelledGraph& g, std::span<const Symbol> w);

bool right_resolving_check(const LabelledGraph& g, Vertex vertex_bound);

inline constexpr std::size_t kMaxLoopLength = 64;
inline constexpr std::size_t kDefaultLoopCap = std::size_t{1} << 20;

/// Labels of closed paths at the root of length 1..max_len, deduplicated,
/// ordered by length then lexicographically.
std::vector<Word> loops_through(const LabelledGraph& g, std::size_t max_len,
                                std::size_t cap = kDefaultLoopCap);

/// Shortest path label from `from` to `to` (empty word when equal), searching
/// at most `max_len` steps.
std::optional<Word> shortest_connector(const LabelledGraph& g, Vertex from, Vertex to,
                                       std::size_t max_len);

inline constexpr std::size_t kMaxReturnSteps = 200;

struct EntropyCounts {
  std::vector<BigInt> r;        // r_0 .. r_N, paths root -> root
  std::vector<BigInt> l;        // l_0 .. l_N, first returns (l_0 = 0)
  std::vector<double> est_r;    // (1/n) ln r_n, NaN when r_n = 0 or n = 0
  std::vector<double> est_l;
  double spr_margin = 0;        // est_r[N] - max_n est_l[n]
};

EntropyCounts return_counts(const LabelledGraph& g, std::size_t n_max);

/// ln of a positive big integer.
double log_big(const BigInt& x);

}  // namespace shiftlab
