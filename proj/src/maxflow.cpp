#include "shiftlab/maxflow.hpp"

#include <deque>

namespace shiftlab {

MaxFlow::MaxFlow(std::size_t nodes) : adj_(nodes) {}

std::size_t MaxFlow::add_node() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

std::size_t MaxFlow::add_edge(std::size_t from, std::size_t to, const Rational& cap) {
  std::size_t id = edges_.size();
  edges_.push_back({to, cap, Rational(0)});
  edges_.push_back({from, Rational(0), Rational(0)});
  adj_[from].push_back(id);
  adj_[to].push_back(id + 1);
  return id;
}

bool MaxFlow::bfs(std::size_t s, std::size_t t) {
  level_.assign(adj_.size(), -1);
  level_[s] = 0;
  std::deque<std::size_t> queue{s};
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t id : adj_[v]) {
      const Edge& e = edges_[id];
      if (level_[e.to] < 0 && e.flow < e.cap) {
        level_[e.to] = level_[v] + 1;
        queue.push_back(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

Rational MaxFlow::push(std::size_t v, std::size_t t, const Rational& limit) {
  if (v == t) return limit;
  for (; next_[v] < adj_[v].size(); ++next_[v]) {
    std::size_t id = adj_[v][next_[v]];
    Edge& e = edges_[id];
    if (level_[e.to] != level_[v] + 1 || e.flow >= e.cap) continue;
    Rational room = e.cap - e.flow;
    Rational pushed = push(e.to, t, limit < room ? limit : room);
    if (pushed > 0) {
      e.flow += pushed;
      edges_[id ^ 1].flow -= pushed;
      return pushed;
    }
  }
  return Rational(0);
}

Rational MaxFlow::run(std::size_t source, std::size_t sink) {
  Rational total = 0;
  Rational unlimited = 1;
  for (const Edge& e : edges_) unlimited += e.cap;
  while (bfs(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (true) {
      Rational f = push(source, sink, unlimited);
      if (f == 0) break;
      total += f;
    }
  }
  return total;
}

}  // namespace shiftlab
