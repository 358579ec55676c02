#include "dynstore/max_flow.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <queue>
#include <stdexcept>

namespace dynstore {

namespace {

// Dinic on integer capacities.
template <typename Int>
class Dinic {
 public:
  explicit Dinic(int n) : head_(static_cast<size_t>(n), -1), level_(static_cast<size_t>(n)), it_(static_cast<size_t>(n)) {}

  void add_edge(int from, int to, Int cap) {
    edges_.push_back({to, head_[static_cast<size_t>(from)], std::move(cap)});
    head_[static_cast<size_t>(from)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[static_cast<size_t>(to)], Int(0)});
    head_[static_cast<size_t>(to)] = static_cast<int>(edges_.size()) - 1;
  }

  Int run(int s, int t) {
    Int flow = 0;
    while (bfs(s, t)) {
      it_ = head_;
      for (;;) {
        Int pushed = dfs(s, t, Int(-1));
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

 private:
  struct Edge {
    int to;
    int next;
    Int cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    q.push(s);
    level_[static_cast<size_t>(s)] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e = head_[static_cast<size_t>(v)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
        const auto& edge = edges_[static_cast<size_t>(e)];
        if (edge.cap > 0 && level_[static_cast<size_t>(edge.to)] == -1) {
          level_[static_cast<size_t>(edge.to)] = level_[static_cast<size_t>(v)] + 1;
          q.push(edge.to);
        }
      }
    }
    return level_[static_cast<size_t>(t)] != -1;
  }

  // limit < 0 means unconstrained.
  Int dfs(int v, int t, Int limit) {
    if (v == t) return limit;
    for (int& e = it_[static_cast<size_t>(v)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
      auto& edge = edges_[static_cast<size_t>(e)];
      if (edge.cap == 0) continue;
      if (level_[static_cast<size_t>(edge.to)] != level_[static_cast<size_t>(v)] + 1) continue;
      Int pass = (limit < 0 || edge.cap < limit) ? edge.cap : limit;
      Int pushed = dfs(edge.to, t, pass);
      if (pushed > 0) {
        edge.cap -= pushed;
        edges_[static_cast<size_t>(e ^ 1)].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> it_;
  std::vector<Edge> edges_;
};

} // namespace

void FlowNetwork::add_edge(int from, int to, std::optional<Rational> capacity) {
  if (from < 0 || from >= vertex_count_ || to < 0 || to >= vertex_count_) {
    throw std::invalid_argument("flow network edge endpoint out of range");
  }
  if (capacity && *capacity < 0) {
    throw std::invalid_argument("negative capacity");
  }
  edges_.push_back({from, to, std::move(capacity)});
}

std::optional<Rational> FlowNetwork::max_flow(int source, int sink) const {
  if (source == sink) throw std::invalid_argument("source equals sink");

  // A source-sink path of unbounded edges makes the flow unbounded.
  {
    std::vector<char> seen(static_cast<size_t>(vertex_count_), 0);
    std::vector<std::vector<int>> unbounded_adj(static_cast<size_t>(vertex_count_));
    for (const auto& e : edges_) {
      if (!e.capacity) unbounded_adj[static_cast<size_t>(e.from)].push_back(e.to);
    }
    std::queue<int> q;
    q.push(source);
    seen[static_cast<size_t>(source)] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (v == sink) return std::nullopt;
      for (int w : unbounded_adj[static_cast<size_t>(v)]) {
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = 1;
          q.push(w);
        }
      }
    }
  }

  // Common denominator so the flow itself runs on integers.
  BigInt scale = 1;
  for (const auto& e : edges_) {
    if (e.capacity) scale = lcm(scale, denominator(*e.capacity));
  }
  std::vector<BigInt> caps;
  caps.reserve(edges_.size());
  BigInt finite_sum = 0;
  for (const auto& e : edges_) {
    if (e.capacity) {
      BigInt c = numerator(*e.capacity) * (scale / denominator(*e.capacity));
      finite_sum += c;
      caps.push_back(std::move(c));
    } else {
      caps.push_back(BigInt(-1));
    }
  }
  // Every augmenting path crosses a finite edge, so the flow is at most the
  // sum of the finite capacities and this sentinel never ends up in a
  // minimum cut.
  const BigInt sentinel = finite_sum + 1;

  BigInt flow;
  if (sentinel <= BigInt(std::numeric_limits<long long>::max() / 4)) {
    Dinic<long long> solver(vertex_count_);
    for (size_t i = 0; i < edges_.size(); ++i) {
      const long long c = caps[i] < 0 ? sentinel.convert_to<long long>()
                                      : caps[i].convert_to<long long>();
      solver.add_edge(edges_[i].from, edges_[i].to, c);
    }
    flow = solver.run(source, sink);
  } else {
    Dinic<BigInt> solver(vertex_count_);
    for (size_t i = 0; i < edges_.size(); ++i) {
      solver.add_edge(edges_[i].from, edges_[i].to, caps[i] < 0 ? sentinel : caps[i]);
    }
    flow = solver.run(source, sink);
  }

  return Rational(flow, scale);
}

} // namespace dynstore
