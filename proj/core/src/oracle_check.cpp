#include "dynstore/oracle_check.hpp"

#include "dynstore/bounds.hpp"
#include "dynstore/cut_engine.hpp"
#include "dynstore/flow_graph.hpp"

namespace dynstore {

OracleSweepResult oracle_check_config(const NetworkConfig& config, const WeightRule& rule) {
  OracleSweepResult result;
  const int n = config.n();
  for_each_permutation(n, [&](const Permutation& pi) {
    const FlowGraph base = FlowGraph::build(config, rule, pi.order());
    bool first = true;
    Rational oracle_min, closed_min;
    for_each_selection(n, config.k_prime, [&](const std::vector<NodeId>& d) {
      const CutValue oracle = max_flow_min_cut(base.with_collector(d));
      const Rational closed = cut_value(config, rule, pi, d);
      ++result.comparisons;
      if (oracle.unbounded() || *oracle.value > closed) ++result.mismatches;
      else if (*oracle.value < closed) ++result.strict_gaps;
      if (first) {
        oracle_min = *oracle.value;
        closed_min = closed;
        first = false;
      } else {
        if (*oracle.value < oracle_min) oracle_min = *oracle.value;
        if (closed < closed_min) closed_min = closed;
      }
    });
    const Rational policy = policy_min_cut_value(config, rule, pi);
    ++result.comparisons;
    if (oracle_min != closed_min || closed_min != policy) ++result.mismatches;
    const CutValue policy_oracle =
        max_flow_min_cut(base.with_collector(min_cut_policy_selection(config, pi)));
    ++result.comparisons;
    if (policy_oracle.unbounded() || *policy_oracle.value != policy) ++result.mismatches;
  });
  return result;
}

OracleSweepResult oracle_check_alpha(const NetworkConfig& base_config) {
  OracleSweepResult result;
  const WeightRule star = WeightRule::star();
  const int n = base_config.n();
  const Permutation id = Permutation::identity(n);
  std::vector<NodeId> selection;
  for (NodeId v = 1; v <= base_config.k_prime; ++v) selection.push_back(v);

  const Rational unbounded_value = oracle_cut(base_config, star, id.order(), selection);

  NetworkConfig binding = base_config;
  binding.alpha = base_config.beta2 / 2;
  NetworkConfig slack = base_config;
  slack.alpha = unbounded_value + 1;

  const Rational bound_value = oracle_cut(binding, star, id.order(), selection);
  const Rational slack_value = oracle_cut(slack, star, id.order(), selection);
  const int bound_edges = base_config.k_prime == n ? n - 1 : base_config.k_prime;
  const Rational expect_binding = Rational(bound_edges) * *binding.alpha;

  result.comparisons += 2;
  if (bound_value != expect_binding) ++result.mismatches;
  if (slack_value != unbounded_value) ++result.mismatches;
  return result;
}

OracleSweepResult oracle_equivalence_sweep(int max_n) {
  OracleSweepResult total;
  const std::vector<Rational> beta1s = {Rational(1), Rational(2), Rational(5, 2)};
  for (int n1 = 1; n1 <= 3; ++n1) {
    for (int n2 = 2; n2 <= 4; ++n2) {
      if (n1 + n2 > max_n) continue;
      for (int k = n1 + 1; k <= n1 + n2; ++k) {
        for (const Rational& beta1 : beta1s) {
          NetworkConfig config;
          config.n1 = n1;
          config.n2 = n2;
          config.beta1 = beta1;
          config.beta2 = 1;
          config.k_prime = k;
          total += oracle_check_config(config, WeightRule::star());
          if (n1 >= 2 && beta1 > config.beta2) {
            const Rational cap = epsilon1_max(config);
            total += oracle_check_config(config, WeightRule::fixed_cost(cap));
            total += oracle_check_config(config, WeightRule::fixed_cost(cap / 2));
          }
          total += oracle_check_alpha(config);
        }
      }
    }
  }
  return total;
}

} // namespace dynstore
