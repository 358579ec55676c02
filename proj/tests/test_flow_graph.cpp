#include "dynstore/flow_graph.hpp"

#include "dynstore/cut_engine.hpp"
#include "dynstore/max_flow.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace dynstore;

namespace {

NetworkConfig uniform_config(int n1, int n2, int k) {
  NetworkConfig cfg;
  cfg.n1 = n1;
  cfg.n2 = n2;
  cfg.beta1 = cfg.beta2 = 1;
  cfg.k_prime = k;
  return cfg;
}

} // namespace

TEST_CASE("empty failure sequence builds the initial graph") {
  const NetworkConfig cfg = preset_cfg_b();
  const FlowGraph g = FlowGraph::build(cfg, WeightRule::star(), {});
  CHECK(g.vertices().size() == 6); // source + 5 originals
  CHECK(g.edges().size() == 5);
  for (const auto& e : g.edges()) {
    CHECK(e.from == g.source_vertex());
    CHECK(!e.capacity.has_value());
  }
}

TEST_CASE("active set replaces failed incarnations") {
  NetworkConfig cfg = uniform_config(2, 3, 3);
  const FlowGraph g = FlowGraph::build(cfg, WeightRule::star(), {1, 3});
  const auto active = g.active_vertices();
  // v1 and v3 replaced by their repaired incarnations, v2/v4/v5 original.
  CHECK(g.vertices()[static_cast<size_t>(g.active_vertex(1))].ordinal == 1);
  CHECK(g.vertices()[static_cast<size_t>(g.active_vertex(3))].ordinal == 2);
  CHECK(g.vertices()[static_cast<size_t>(g.active_vertex(2))].ordinal == 0);
  CHECK(g.vertices()[static_cast<size_t>(g.active_vertex(4))].ordinal == 0);
  CHECK(g.vertices()[static_cast<size_t>(g.active_vertex(5))].ordinal == 0);
  CHECK(active.size() == 5);
}

TEST_CASE("each repair unit pulls from all other active incarnations") {
  const NetworkConfig cfg = preset_cfg_b();
  const FlowGraph g = FlowGraph::build(cfg, WeightRule::star(), {1, 2, 3, 4, 5});
  // Repair unit of the 5th failure: 4 in-edges carrying the helpers'
  // bandwidths, i.e. beta1 from each of the two high nodes and beta2 from
  // the two remaining low nodes.
  int cu5 = -1;
  for (int vid = 0; vid < static_cast<int>(g.vertices().size()); ++vid) {
    const auto& v = g.vertices()[static_cast<size_t>(vid)];
    if (v.kind == FlowGraph::Vertex::Kind::RepairUnit && v.ordinal == 5) cu5 = vid;
  }
  REQUIRE(cu5 >= 0);
  std::vector<Rational> weights;
  for (const auto& e : g.edges()) {
    if (e.to == cu5) weights.push_back(*e.capacity);
  }
  std::sort(weights.begin(), weights.end());
  CHECK(weights == std::vector<Rational>{1, 1, 2, 2});
}

TEST_CASE("growth is append-only") {
  const NetworkConfig cfg = preset_cfg_b();
  const std::vector<NodeId> failures = {2, 4, 2, 1, 5, 3, 2};
  for (size_t len = 0; len + 1 <= failures.size(); ++len) {
    const FlowGraph shorter = FlowGraph::build(
        cfg, WeightRule::star(), std::vector<NodeId>(failures.begin(), failures.begin() + len));
    const FlowGraph longer = FlowGraph::build(
        cfg, WeightRule::star(),
        std::vector<NodeId>(failures.begin(), failures.begin() + len + 1));
    REQUIRE(longer.vertices().size() >= shorter.vertices().size());
    REQUIRE(longer.edges().size() >= shorter.edges().size());
    for (size_t i = 0; i < shorter.edges().size(); ++i) {
      CHECK(shorter.edges()[i].from == longer.edges()[i].from);
      CHECK(shorter.edges()[i].to == longer.edges()[i].to);
    }
  }
}

TEST_CASE("collector attachment") {
  const NetworkConfig cfg = preset_cfg_b();
  const FlowGraph g = FlowGraph::build(cfg, WeightRule::star(), {1, 2, 3, 4, 5});

  const FlowGraph with_dc = g.with_collector({2, 3, 4, 5});
  REQUIRE(with_dc.collector_vertex().has_value());
  int collector_edges = 0;
  for (const auto& e : with_dc.edges()) {
    if (e.to == *with_dc.collector_vertex()) {
      ++collector_edges;
      CHECK(!e.capacity.has_value());
    }
  }
  CHECK(collector_edges == 4);

  // Stale incarnation: node 1's original was replaced by the first repair.
  CHECK_THROWS(g.with_collector_vertices({1}));
  CHECK_THROWS(with_dc.with_collector({1, 2, 3, 4})); // already has one
  CHECK_THROWS(g.with_collector({0, 2, 3, 4}));
}

TEST_CASE("edge dump uses the documented vertex names") {
  const NetworkConfig cfg = uniform_config(1, 2, 2);
  const FlowGraph g =
      FlowGraph::build(cfg, WeightRule::star(), {2}).with_collector({1, 2});
  std::ostringstream out;
  g.dump(out);
  const std::string text = out.str();
  CHECK(text.find("src v1_0 inf") != std::string::npos);
  CHECK(text.find("v1_0 cu1 1") != std::string::npos);
  CHECK(text.find("cu1 v2_1 inf") != std::string::npos);
  CHECK(text.find("v2_1 dc inf") != std::string::npos);
}

TEST_CASE("min cut is unbounded while a selected node has never failed") {
  const NetworkConfig cfg = preset_cfg_b();
  const FlowGraph g = FlowGraph::build(cfg, WeightRule::star(), {});
  CHECK(max_flow_min_cut(g.with_collector({1, 2, 3, 4})).unbounded());
  CHECK_THROWS(oracle_cut(cfg, WeightRule::star(), {}, {1, 2, 3, 4}));
}

TEST_CASE("covering sequence cut values") {
  const WeightRule star = WeightRule::star();

  SUBCASE("small network equals the worst-case constant") {
    const NetworkConfig cfg = preset_cfg_b();
    CHECK(oracle_cut(cfg, star, {1, 2, 3, 4, 5}, {1, 2, 3, 4}) == 11);
  }

  SUBCASE("large network worked example") {
    const NetworkConfig cfg = preset_cfg_a();
    std::vector<NodeId> failures, selection;
    for (NodeId v = 1; v <= 20; ++v) failures.push_back(v);
    for (NodeId v = 1; v <= 13; ++v) selection.push_back(v);
    CHECK(oracle_cut(cfg, star, failures, selection) == 214);
  }

  SUBCASE("tilted rule at the identity") {
    const NetworkConfig cfg = preset_cfg_a();
    std::vector<NodeId> failures, selection;
    for (NodeId v = 1; v <= 20; ++v) failures.push_back(v);
    for (NodeId v = 1; v <= 13; ++v) selection.push_back(v);
    CHECK(oracle_cut(cfg, WeightRule::fixed_cost(Rational(1, 20)), failures, selection) ==
          Rational(865, 4));
  }
}

TEST_CASE("the accumulation upper-bounds the oracle, tight at the optimum") {
  // With beta1 > beta2 a cheaper cut can route through an expensive
  // helper's earlier repair unit, so suboptimal selections sit strictly
  // between the minimum and their accumulation value.
  NetworkConfig cfg = uniform_config(1, 2, 2);
  cfg.beta1 = 2;
  const WeightRule star = WeightRule::star();
  const Permutation id = Permutation::identity(3);

  CHECK(cut_value(cfg, star, id, {2, 3}) == 5);
  CHECK(oracle_cut(cfg, star, {1, 2, 3}, {2, 3}) == 3);
  CHECK(oracle_cut(cfg, star, {1, 2, 3}, {1, 2}) == 3);
  CHECK(cut_value(cfg, star, id, {1, 2}) == 3);
  CHECK(policy_min_cut_value(cfg, star, id) == 3);
}

TEST_CASE("state-aware selections maximize the accumulation, not the flow") {
  const NetworkConfig cfg = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  const Permutation id = Permutation::identity(5);
  const std::vector<NodeId> memory_selection = {2, 3, 4, 5};
  CHECK(cut_value(cfg, star, id, memory_selection) == 14);
  CHECK(max_cut(cfg, star, id, SelectionMode::Exhaustive).value == 14);
  // The flow-graph min-cut for every 4-node selection at the identity is
  // pinned at the 11-valued cut through all current incarnations.
  for_each_selection(5, 4, [&](const std::vector<NodeId>& d) {
    CHECK(oracle_cut(cfg, star, {1, 2, 3, 4, 5}, d) == 11);
  });
}

TEST_CASE("oracle minimum matches the policy value on arbitrary covering sequences") {
  std::mt19937_64 rng(2024);
  const WeightRule star = WeightRule::star();
  for (int trial = 0; trial < 30; ++trial) {
    NetworkConfig cfg = uniform_config(1 + static_cast<int>(rng() % 2),
                                       2 + static_cast<int>(rng() % 2), 0);
    cfg.beta1 = Rational(1 + static_cast<int>(rng() % 3), 1);
    cfg.k_prime = cfg.n1 + 1 + static_cast<int>(rng() % cfg.n2);
    const int n = cfg.n();

    std::vector<NodeId> failures;
    for (NodeId v = 1; v <= n; ++v) failures.push_back(v); // covering prefix
    const int extra = 3 + static_cast<int>(rng() % 8);
    for (int i = 0; i < extra; ++i) failures.push_back(static_cast<NodeId>(rng() % n + 1));

    Permutation pi = Permutation::identity(n);
    for (NodeId v : failures) pi = apply_failure(pi, v);

    const FlowGraph base = FlowGraph::build(cfg, star, failures);
    bool first = true;
    Rational oracle_min;
    for_each_selection(n, cfg.k_prime, [&](const std::vector<NodeId>& d) {
      const CutValue cut = max_flow_min_cut(base.with_collector(d));
      REQUIRE(!cut.unbounded());
      CHECK(*cut.value <= cut_value(cfg, star, pi, d));
      if (first || *cut.value < oracle_min) oracle_min = *cut.value;
      first = false;
    });
    CHECK(oracle_min == policy_min_cut_value(cfg, star, pi));
  }
}

TEST_CASE("finite storage caps the cut") {
  const WeightRule star = WeightRule::star();
  for (int n1 = 1; n1 <= 2; ++n1) {
    for (int n2 = 2; n2 <= 3; ++n2) {
      for (int k = n1 + 1; k < n1 + n2; ++k) { // k' < n
        NetworkConfig cfg = uniform_config(n1, n2, k);
        cfg.beta1 = 2;
        const int n = cfg.n();
        std::vector<NodeId> failures, selection;
        for (NodeId v = 1; v <= n; ++v) failures.push_back(v);
        for (NodeId v = 1; v <= k; ++v) selection.push_back(v);

        const Rational unbounded_value = oracle_cut(cfg, star, failures, selection);

        NetworkConfig capped = cfg;
        capped.alpha = Rational(1, 2);
        CHECK(oracle_cut(capped, star, failures, selection) ==
              std::min(Rational(k) * *capped.alpha, unbounded_value));

        capped.alpha = unbounded_value + 3;
        CHECK(oracle_cut(capped, star, failures, selection) == unbounded_value);
      }
    }
  }
}

TEST_CASE("generic max-flow handles unbounded paths and zero flow") {
  FlowNetwork net(4);
  net.add_edge(0, 1, std::nullopt);
  net.add_edge(1, 2, Rational(3, 2));
  net.add_edge(2, 3, std::nullopt);
  CHECK(*net.max_flow(0, 3) == Rational(3, 2));

  FlowNetwork unbounded(3);
  unbounded.add_edge(0, 1, std::nullopt);
  unbounded.add_edge(1, 2, std::nullopt);
  CHECK(!unbounded.max_flow(0, 2).has_value());

  FlowNetwork disconnected(3);
  disconnected.add_edge(0, 1, Rational(1));
  CHECK(*disconnected.max_flow(0, 2) == 0);

  CHECK_THROWS(net.max_flow(1, 1));
  FlowNetwork bad(2);
  CHECK_THROWS(bad.add_edge(0, 1, Rational(-1)));
}
