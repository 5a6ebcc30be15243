#pragma once

// Dinic max-flow with exact rational capacities.

#include "shiftlab/rational.hpp"

#include <cstddef>
#include <vector>

namespace shiftlab {

class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes);

  std::size_t add_node();
  /// Returns the edge id (its reverse is id ^ 1).
  std::size_t add_edge(std::size_t from, std::size_t to, const Rational& cap);
  Rational run(std::size_t source, std::size_t sink);
  const Rational& flow_on(std::size_t edge) const { return edges_[edge].flow; }
  std::size_t nodes() const noexcept { return adj_.size(); }

 private:
  struct Edge {
    std::size_t to;
    Rational cap;
    Rational flow;
  };

  bool bfs(std::size_t s, std::size_t t);
  Rational push(std::size_t v, std::size_t t, const Rational& limit);

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::ptrdiff_t> level_;
  std::vector<std::size_t> next_;
};

}  // namespace shiftlab
