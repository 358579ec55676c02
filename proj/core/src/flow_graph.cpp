#include "dynstore/flow_graph.hpp"

#include "dynstore/max_flow.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace dynstore {

FlowGraph FlowGraph::build(const NetworkConfig& config, const WeightRule& rule,
                           const std::vector<NodeId>& failures) {
  config.require_valid();
  const int n = config.n();

  FlowGraph g;
  g.config_ = config;
  g.vertices_.push_back(Vertex{Vertex::Kind::Source, 0, 0});
  g.active_.resize(static_cast<size_t>(n));
  for (NodeId v = 1; v <= n; ++v) {
    g.vertices_.push_back(Vertex{Vertex::Kind::Incarnation, v, 0});
    g.active_[static_cast<size_t>(v - 1)] = v;
    g.edges_.push_back(Edge{0, v, std::nullopt});
  }

  for (NodeId failed : failures) {
    if (failed < 1 || failed > n) throw std::invalid_argument("unknown node id in failure sequence");
    ++g.failure_count_;
    const int j = g.failure_count_;

    const int cu = static_cast<int>(g.vertices_.size());
    g.vertices_.push_back(Vertex{Vertex::Kind::RepairUnit, 0, j});
    // Every active incarnation except the failed one helps.
    for (NodeId helper = 1; helper <= n; ++helper) {
      if (helper == failed) continue;
      g.edges_.push_back(Edge{g.active_[static_cast<size_t>(helper - 1)], cu,
                              rule.weight(config, failed, helper)});
    }
    const int reborn = static_cast<int>(g.vertices_.size());
    g.vertices_.push_back(Vertex{Vertex::Kind::Incarnation, failed, j});
    g.edges_.push_back(Edge{cu, reborn, std::nullopt});
    g.active_[static_cast<size_t>(failed - 1)] = reborn;
  }
  return g;
}

FlowGraph FlowGraph::with_collector(const std::vector<NodeId>& selection) const {
  std::vector<int> vertex_ids;
  vertex_ids.reserve(selection.size());
  for (NodeId v : selection) {
    if (v < 1 || v > config_.n()) throw std::invalid_argument("unknown node id in selection");
    vertex_ids.push_back(active_vertex(v));
  }
  return with_collector_vertices(vertex_ids);
}

FlowGraph FlowGraph::with_collector_vertices(const std::vector<int>& vertex_ids) const {
  if (collector_) throw std::invalid_argument("graph already has a collector");
  FlowGraph g = *this;
  const int dc = static_cast<int>(g.vertices_.size());
  g.vertices_.push_back(Vertex{Vertex::Kind::Collector, 0, 0});
  for (int vid : vertex_ids) {
    if (vid < 0 || vid >= static_cast<int>(vertices_.size())) {
      throw std::invalid_argument("collector attached to unknown vertex");
    }
    if (std::find(active_.begin(), active_.end(), vid) == active_.end()) {
      throw std::invalid_argument("collector attached to a stale incarnation");
    }
    g.edges_.push_back(Edge{vid, dc, std::nullopt});
  }
  g.collector_ = dc;
  return g;
}

int FlowGraph::active_vertex(NodeId node) const {
  return active_.at(static_cast<size_t>(node - 1));
}

std::vector<int> FlowGraph::stale_vertices() const {
  std::vector<int> stale;
  for (int vid = 0; vid < static_cast<int>(vertices_.size()); ++vid) {
    if (vertices_[static_cast<size_t>(vid)].kind != Vertex::Kind::Incarnation) continue;
    if (std::find(active_.begin(), active_.end(), vid) == active_.end()) stale.push_back(vid);
  }
  return stale;
}

std::string FlowGraph::vertex_name(int vertex_id) const {
  const Vertex& v = vertices_.at(static_cast<size_t>(vertex_id));
  switch (v.kind) {
    case Vertex::Kind::Source:
      return "src";
    case Vertex::Kind::Incarnation:
      return "v" + std::to_string(v.node) + "_" + std::to_string(v.ordinal);
    case Vertex::Kind::RepairUnit:
      return "cu" + std::to_string(v.ordinal);
    case Vertex::Kind::Collector:
      return "dc";
  }
  return "?";
}

void FlowGraph::dump(std::ostream& out) const {
  for (const Edge& e : edges_) {
    out << vertex_name(e.from) << ' ' << vertex_name(e.to) << ' '
        << (e.capacity ? to_fraction_string(*e.capacity) : "inf") << '\n';
  }
}

CutValue max_flow_min_cut(const FlowGraph& graph) {
  if (!graph.collector_vertex()) {
    throw std::invalid_argument("min-cut requires a collector");
  }
  // Each incarnation is split into an in/out pair joined by an
  // alpha-capacity edge; other vertices keep a single node.
  const auto& vertices = graph.vertices();
  std::vector<int> in_id(vertices.size()), out_id(vertices.size());
  int next = 0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].kind == FlowGraph::Vertex::Kind::Incarnation) {
      in_id[i] = next++;
      out_id[i] = next++;
    } else {
      in_id[i] = out_id[i] = next++;
    }
  }

  FlowNetwork net(next);
  const std::optional<Rational>& alpha = graph.config().alpha;
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].kind == FlowGraph::Vertex::Kind::Incarnation) {
      net.add_edge(in_id[i], out_id[i], alpha);
    }
  }
  for (const auto& e : graph.edges()) {
    net.add_edge(out_id[static_cast<size_t>(e.from)], in_id[static_cast<size_t>(e.to)], e.capacity);
  }

  // The cut separates {source} plus every stale incarnation from the
  // collector, so stale incarnations are contracted into the source side.
  const int s = out_id[static_cast<size_t>(graph.source_vertex())];
  for (int vid : graph.stale_vertices()) {
    net.add_edge(s, in_id[static_cast<size_t>(vid)], std::nullopt);
    net.add_edge(s, out_id[static_cast<size_t>(vid)], std::nullopt);
  }

  const int t = in_id[static_cast<size_t>(*graph.collector_vertex())];
  auto flow = net.max_flow(s, t);
  return CutValue{std::move(flow)};
}

Rational oracle_cut(const NetworkConfig& config, const WeightRule& rule,
                    const std::vector<NodeId>& failures,
                    const std::vector<NodeId>& selection) {
  const FlowGraph g = FlowGraph::build(config, rule, failures).with_collector(selection);
  CutValue cut = max_flow_min_cut(g);
  if (cut.unbounded()) {
    throw std::domain_error("oracle cut is unbounded; failure sequence does not cover all selected nodes");
  }
  return *cut.value;
}

} // namespace dynstore
