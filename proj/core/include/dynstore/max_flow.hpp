#pragma once

#include "dynstore/rational.hpp"

#include <optional>
#include <vector>

namespace dynstore {

// Exact max-flow on a directed graph with rational or unbounded capacities.
// Intended as a ground-truth oracle at desk scale, not as a general-purpose
// solver.
class FlowNetwork {
 public:
  explicit FlowNetwork(int vertex_count) : vertex_count_(vertex_count) {}

  void add_edge(int from, int to, std::optional<Rational> capacity);

  int vertex_count() const { return vertex_count_; }

  // nullopt = unbounded (a source-sink path of unbounded edges exists).
  // Capacities are scaled to a common denominator and the flow is computed
  // with integer arithmetic, so the result is exact.
  std::optional<Rational> max_flow(int source, int sink) const;

 private:
  struct Edge {
    int from;
    int to;
    std::optional<Rational> capacity;
  };
  int vertex_count_;
  std::vector<Edge> edges_;
};

} // namespace dynstore
