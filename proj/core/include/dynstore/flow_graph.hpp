#pragma once

#include "dynstore/config.hpp"
#include "dynstore/weight_rule.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dynstore {

// The growing DAG that records every repair since t=0: a source feeding the
// initial nodes, one repair unit per failure pulling from the then-active
// incarnations, and (at read time) a collector attached to a selection of
// active incarnations. Its source-to-collector min-cut is the storable file
// size. Grows append-only: building with one more failure extends the
// vertex and edge sets of the shorter graph.
class FlowGraph {
 public:
  struct Vertex {
    enum class Kind { Source, Incarnation, RepairUnit, Collector };
    Kind kind = Kind::Source;
    NodeId node = 0;  // Incarnation only
    int ordinal = 0;  // Incarnation: failure index that created it (0 = original); RepairUnit: failure index
  };

  struct Edge {
    int from = 0;
    int to = 0;
    std::optional<Rational> capacity; // nullopt = unbounded
  };

  static FlowGraph build(const NetworkConfig& config, const WeightRule& rule,
                         const std::vector<NodeId>& failures);

  // Collector attached to the current incarnations of the given node ids
  // with unbounded in-edges. Exactly one collector per graph.
  FlowGraph with_collector(const std::vector<NodeId>& selection) const;
  // Same, but by explicit vertex ids; throws if any vertex is not an active
  // incarnation.
  FlowGraph with_collector_vertices(const std::vector<int>& vertex_ids) const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int source_vertex() const { return 0; }
  std::optional<int> collector_vertex() const { return collector_; }

  // Current incarnation vertex of a node.
  int active_vertex(NodeId node) const;
  std::vector<int> active_vertices() const { return active_; }
  // Incarnations that have been replaced by a later repair.
  std::vector<int> stale_vertices() const;

  int failure_count() const { return failure_count_; }
  const NetworkConfig& config() const { return config_; }

  std::string vertex_name(int vertex_id) const;
  // Plain-text edge list, one "from to capacity" line per edge; unbounded
  // capacity prints as "inf".
  void dump(std::ostream& out) const;

 private:
  FlowGraph() = default;

  NetworkConfig config_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<int> active_;     // node id - 1 -> vertex id
  std::optional<int> collector_;
  int failure_count_ = 0;
};

struct CutValue {
  std::optional<Rational> value; // nullopt = unbounded
  bool unbounded() const { return !value.has_value(); }
  bool operator==(const CutValue&) const = default;
};

// Exact min-cut between {source} + all stale incarnations and the
// collector. Finite alpha is honored by splitting each incarnation into an
// in/out pair joined by an alpha-capacity edge. Returns 0 if the collector
// is unreachable and unbounded when every cut crosses an unbounded edge.
CutValue max_flow_min_cut(const FlowGraph& graph);

// build + with_collector + max_flow_min_cut. Throws std::domain_error if
// the cut is unbounded (some selected node never failed and alpha is
// unbounded).
Rational oracle_cut(const NetworkConfig& config, const WeightRule& rule,
                    const std::vector<NodeId>& failures,
                    const std::vector<NodeId>& selection);

} // namespace dynstore
