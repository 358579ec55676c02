#include "dynstore/oracle_check.hpp"

#include "dynstore/cut_engine.hpp"
#include "dynstore/flow_graph.hpp"

#include <doctest.h>

using namespace dynstore;

TEST_CASE("oracle equivalence sweep is clean at desk scale") {
  // Full n <= 6 sweep runs in the acceptance suite; n <= 5 here.
  const OracleSweepResult result = oracle_equivalence_sweep(5);
  CHECK(result.comparisons > 40000);
  CHECK(result.mismatches == 0);
}

TEST_CASE("an injected off-by-beta2 fault is detected") {
  const NetworkConfig cfg = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  long long mismatches = 0;
  for_each_permutation(5, [&](const Permutation& pi) {
    const FlowGraph base = FlowGraph::build(cfg, star, pi.order());
    bool first = true;
    Rational oracle_min, faulty_min;
    for_each_selection(5, 4, [&](const std::vector<NodeId>& d) {
      const CutValue oracle = max_flow_min_cut(base.with_collector(d));
      const Rational faulty = cut_value(cfg, star, pi, d) + cfg.beta2;
      if (first) {
        oracle_min = *oracle.value;
        faulty_min = faulty;
        first = false;
      } else {
        if (*oracle.value < oracle_min) oracle_min = *oracle.value;
        if (faulty < faulty_min) faulty_min = faulty;
      }
    });
    if (oracle_min != faulty_min) ++mismatches;
  });
  CHECK(mismatches > 0);
}

TEST_CASE("state-aware closed form equals the exhaustive minimax at desk scale") {
  for (int n1 = 1; n1 <= 3; ++n1) {
    for (int n2 = 2; n2 <= 4; ++n2) {
      if (n1 + n2 > 5) continue;
      for (int k = std::max(n1 + 1, n2 + 1); k <= n1 + n2; ++k) {
        for (int b1 : {1, 2}) {
          NetworkConfig cfg;
          cfg.n1 = n1;
          cfg.n2 = n2;
          cfg.beta1 = b1;
          cfg.beta2 = 1;
          cfg.k_prime = k;
          if (!cfg.validate().empty()) continue;
          bool first = true;
          Rational worst;
          for_each_permutation(cfg.n(), [&](const Permutation& pi) {
            const Rational value =
                max_cut(cfg, WeightRule::star(), pi, SelectionMode::Exhaustive).value;
            if (first || value < worst) worst = value;
            first = false;
          });
          CHECK(worst == static_memory_cut(cfg));
        }
      }
    }
  }
}
