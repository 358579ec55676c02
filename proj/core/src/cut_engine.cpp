#include "dynstore/cut_engine.hpp"

#include <algorithm>
#include <numeric>

namespace dynstore {

namespace {

constexpr std::uint64_t kSelectionGuard = 1'000'000;   // exhaustive C(n,k') scans
constexpr std::uint64_t kClassGuard = 20'000'000;      // position-class scans
constexpr int kPermutationGuard = 8;                   // n! sweeps

void check_selection(const NetworkConfig& config, const std::vector<NodeId>& selection) {
  if (static_cast<int>(selection.size()) != config.k_prime) {
    throw std::invalid_argument("selection must contain exactly k' nodes");
  }
  std::vector<char> seen(static_cast<size_t>(config.n()), 0);
  for (NodeId v : selection) {
    if (v < 1 || v > config.n()) throw std::invalid_argument("selection node out of range");
    if (seen[static_cast<size_t>(v - 1)]++) throw std::invalid_argument("selection node repeated");
  }
}

// Tilt slope: how much a selected low node failing before a selected high
// node reduces that pair's contribution relative to beta1-beta2.
Rational rule_offset_slope(const NetworkConfig& config, const WeightRule& rule) {
  if (rule.is_star()) return Rational(0);
  if (rule.is_fixed_cost()) {
    return Rational(config.n1 - 1) * *rule.epsilon1() / config.n2;
  }
  if (rule.is_hetero_cost()) {
    const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model);
    if (!tc) throw std::invalid_argument("hetero rule requires a two-class failure model");
    return tc->q * Rational(config.n1 - 1) * *rule.epsilon1() / (tc->p * config.n2);
  }
  throw std::invalid_argument("explicit rules have no closed-form cut");
}

Rational rule_offset_coef(const NetworkConfig& config, const WeightRule& rule) {
  return config.beta1 - config.beta2 - rule_offset_slope(config, rule);
}

Rational rule_identity_min_cut(const NetworkConfig& config, const WeightRule& rule) {
  if (rule.is_star()) return static_min_cut(config);
  return identity_min_cut(config, *rule.epsilon1());
}

void require_policy(const NetworkConfig& config, const WeightRule& rule) {
  if (!rule.policy_applies(config)) {
    throw std::domain_error("selection policy is not admissible for this rule/config");
  }
}

void require_unbounded_alpha(const NetworkConfig& config) {
  if (config.alpha) {
    throw std::domain_error("closed-form cuts assume unbounded node storage; use the flow-graph oracle for finite alpha");
  }
}

} // namespace

Rational cut_value(const NetworkConfig& config, const WeightRule& rule, const Permutation& pi,
                   const std::vector<NodeId>& selection) {
  config.require_valid();
  require_unbounded_alpha(config);
  if (pi.size() != config.n()) throw std::invalid_argument("permutation size mismatch");
  check_selection(config, selection);

  std::vector<NodeId> by_position = selection;
  std::sort(by_position.begin(), by_position.end(),
            [&](NodeId a, NodeId b) { return pi.position(a) < pi.position(b); });

  Rational total = 0;
  for (size_t i = 0; i < by_position.size(); ++i) {
    const NodeId u = by_position[i];
    for (NodeId v = 1; v <= config.n(); ++v) {
      if (v != u) total += rule.weight(config, u, v);
    }
    for (size_t j = 0; j < i; ++j) {
      total -= rule.weight(config, u, by_position[j]);
    }
  }
  return total;
}

int selected_low_preceding(const NetworkConfig& config, const Permutation& pi,
                           const std::vector<NodeId>& selection, NodeId node) {
  if (std::find(selection.begin(), selection.end(), node) == selection.end()) {
    throw std::invalid_argument("node is not part of the selection");
  }
  const int limit = pi.position(node);
  int count = 0;
  for (NodeId v : selection) {
    if (config.node_class(v) == NodeClass::Low && pi.position(v) <= limit) ++count;
  }
  return count;
}

std::vector<NodeId> min_cut_policy_selection(const NetworkConfig& config, const Permutation& pi) {
  std::vector<NodeId> selection;
  selection.reserve(static_cast<size_t>(config.k_prime));
  for (NodeId v = 1; v <= config.n1; ++v) selection.push_back(v);
  int need = config.min_low_selected();
  for (int pos = config.n(); pos >= 1 && need > 0; --pos) {
    const NodeId v = pi.at(pos);
    if (config.node_class(v) == NodeClass::Low) {
      selection.push_back(v);
      --need;
    }
  }
  std::sort(selection.begin(), selection.end());
  return selection;
}

std::vector<NodeId> max_cut_policy_selection(const NetworkConfig& config, const Permutation& pi) {
  if (config.min_high_selected() < 0) {
    throw std::domain_error("maximizing policy needs k' >= n2");
  }
  std::vector<NodeId> selection;
  selection.reserve(static_cast<size_t>(config.k_prime));
  for (NodeId v = config.n1 + 1; v <= config.n(); ++v) selection.push_back(v);
  int need = config.min_high_selected();
  for (int pos = config.n(); pos >= 1 && need > 0; --pos) {
    const NodeId v = pi.at(pos);
    if (config.node_class(v) == NodeClass::High) {
      selection.push_back(v);
      --need;
    }
  }
  std::sort(selection.begin(), selection.end());
  return selection;
}

namespace {

template <typename Better>
CutReport scan_selections(const NetworkConfig& config, const WeightRule& rule,
                          const Permutation& pi, Better better) {
  if (binomial_count(config.n(), config.k_prime, kSelectionGuard) > kSelectionGuard) {
    throw WorkLimitError("selection scan beyond the C(n,k') guard; use policy mode");
  }
  bool first = true;
  Rational best;
  std::vector<NodeId> best_selection;
  for_each_selection(config.n(), config.k_prime, [&](const std::vector<NodeId>& d) {
    Rational value = cut_value(config, rule, pi, d);
    if (first || better(value, best)) {
      first = false;
      best = std::move(value);
      best_selection = d;
    }
  });
  return CutReport{std::move(best), std::move(best_selection), pi};
}

} // namespace

CutReport min_cut(const NetworkConfig& config, const WeightRule& rule, const Permutation& pi,
                  SelectionMode mode) {
  if (mode == SelectionMode::Exhaustive) {
    return scan_selections(config, rule, pi, [](const Rational& a, const Rational& b) { return a < b; });
  }
  require_policy(config, rule);
  require_unbounded_alpha(config);
  auto selection = min_cut_policy_selection(config, pi);
  Rational value = cut_value(config, rule, pi, selection);
  return CutReport{std::move(value), std::move(selection), pi};
}

CutReport max_cut(const NetworkConfig& config, const WeightRule& rule, const Permutation& pi,
                  SelectionMode mode) {
  if (mode == SelectionMode::Exhaustive) {
    return scan_selections(config, rule, pi, [](const Rational& a, const Rational& b) { return a > b; });
  }
  if (!rule.is_star()) {
    throw std::domain_error("maximizing policy is proven for the star rule only");
  }
  require_unbounded_alpha(config);
  auto selection = max_cut_policy_selection(config, pi);
  Rational value = cut_value(config, rule, pi, selection);
  return CutReport{std::move(value), std::move(selection), pi};
}

Rational static_min_cut(const NetworkConfig& config) {
  config.require_valid();
  const int a = config.min_low_selected();
  const Rational high_part = Rational(config.n1) * (config.n1 - 1) / 2 * config.beta1;
  const Rational low_part =
      (Rational(config.n1) * config.n2 + Rational(a) * config.n2 - Rational(a) * (a + 1) / 2) *
      config.beta2;
  return high_part + low_part;
}

Rational static_min_cut_alt(const NetworkConfig& config) {
  config.require_valid();
  const int a = config.min_low_selected();
  return Rational(config.n1) * (config.n1 - 1) / 2 * config.beta1 +
         (Rational(config.n2) * (config.n1 + a - 1) - Rational(a) * (a + 1) / 2) * config.beta2;
}

Rational static_memory_cut(const NetworkConfig& config) {
  config.require_valid();
  const int a_hat = config.min_high_selected();
  if (a_hat < 1) throw std::domain_error("state-aware constant needs k' - n2 >= 1");
  Rational total = 0;
  for (int i = 1; i <= a_hat; ++i) {
    total += Rational(config.n1) * config.beta1 + Rational(config.n2) * config.beta2 -
             Rational(i) * config.beta1;
  }
  for (int j = 1; j <= config.n2; ++j) {
    total += Rational(config.n1 - a_hat) * config.beta1 + Rational(config.n2) * config.beta2 -
             Rational(j) * config.beta2;
  }
  return total;
}

Rational identity_min_cut(const NetworkConfig& config, const Rational& epsilon1) {
  return static_min_cut(config) + Rational(config.n1) * (config.n1 - 1) / 2 * epsilon1;
}

Rational min_cut_offset_form(const NetworkConfig& config, const Rational& epsilon1,
                             const Permutation& pi) {
  const WeightRule rule = epsilon1 == 0 ? WeightRule::star() : WeightRule::fixed_cost(epsilon1);
  require_policy(config, rule);
  const auto u_positions = position_class_of(config, pi);
  const long long offset = class_offset_sum(config.n(), config.min_low_selected(), u_positions);
  return rule_identity_min_cut(config, rule) + Rational(offset) * rule_offset_coef(config, rule);
}

Rational policy_min_cut_value(const NetworkConfig& config, const WeightRule& rule,
                              const Permutation& pi) {
  require_policy(config, rule);
  require_unbounded_alpha(config);
  const auto u_positions = position_class_of(config, pi);
  const long long offset = class_offset_sum(config.n(), config.min_low_selected(), u_positions);
  return rule_identity_min_cut(config, rule) + Rational(offset) * rule_offset_coef(config, rule);
}

Rational policy_max_cut_value(const NetworkConfig& config, const Permutation& pi) {
  require_unbounded_alpha(config);
  const int a_hat = config.min_high_selected();
  if (a_hat < 0) throw std::domain_error("maximizing policy needs k' >= n2");

  // Identity-permutation value of the maximizing selection; holds for
  // a_hat = 0 as well (the selection is then exactly L).
  Rational base = 0;
  for (int i = 1; i <= a_hat; ++i) {
    base += Rational(config.n1 - i) * config.beta1 + Rational(config.n2) * config.beta2;
  }
  for (int j = 1; j <= config.n2; ++j) {
    base += Rational(config.n1 - a_hat) * config.beta1 + Rational(config.n2 - j) * config.beta2;
  }

  // Each selected high node adds (beta1-beta2) per low node failing before
  // it; the selected high nodes are the a_hat most recent.
  const auto u_positions = position_class_of(config, pi);
  long long offset = 0;
  const int n1 = config.n1;
  for (int idx = n1 - a_hat; idx < n1; ++idx) {
    const int pos = u_positions[static_cast<size_t>(idx)];
    offset += pos - 1 - idx; // low positions before pos
  }
  return base + Rational(offset) * (config.beta1 - config.beta2);
}

std::vector<int> position_class_of(const NetworkConfig& config, const Permutation& pi) {
  std::vector<int> positions;
  positions.reserve(static_cast<size_t>(config.n1));
  for (NodeId v = 1; v <= config.n1; ++v) positions.push_back(pi.position(v));
  std::sort(positions.begin(), positions.end());
  return positions;
}

long long class_offset_sum(int n, int a, const std::vector<int>& u_positions) {
  // Selected low positions: the last `a` positions not occupied by U.
  std::vector<char> is_u(static_cast<size_t>(n + 1), 0);
  for (int p : u_positions) is_u[static_cast<size_t>(p)] = 1;
  std::vector<char> selected(static_cast<size_t>(n + 1), 0);
  int need = a;
  for (int p = n; p >= 1 && need > 0; --p) {
    if (!is_u[static_cast<size_t>(p)]) {
      selected[static_cast<size_t>(p)] = 1;
      --need;
    }
  }
  long long sum = 0;
  long long running = 0;
  for (int p = 1; p <= n; ++p) {
    if (selected[static_cast<size_t>(p)]) ++running;
    else if (is_u[static_cast<size_t>(p)]) sum += running;
  }
  return sum;
}

Rational class_min_cut(const NetworkConfig& config, const WeightRule& rule,
                       const std::vector<int>& u_positions) {
  require_policy(config, rule);
  const long long offset =
      class_offset_sum(config.n(), config.min_low_selected(), u_positions);
  return rule_identity_min_cut(config, rule) + Rational(offset) * rule_offset_coef(config, rule);
}

namespace {

// Runs fn over every position class; fn receives the integer offset sum.
template <typename Fn>
void scan_class_offsets(const NetworkConfig& config, Fn fn) {
  const int n = config.n();
  const int a = config.min_low_selected();
  if (binomial_count(n, config.n1, kClassGuard) > kClassGuard) {
    throw WorkLimitError("position-class scan beyond the C(n,n1) guard");
  }
  for_each_position_class(n, config.n1, [&](const std::vector<int>& u_positions) {
    fn(class_offset_sum(n, a, u_positions));
  });
}

void require_class_rule(const NetworkConfig& config, const WeightRule& rule) {
  if (!rule.is_star() && !rule.is_fixed_cost()) {
    throw std::invalid_argument("position-class averages apply to the star and fixed-cost rules");
  }
  require_policy(config, rule);
  require_unbounded_alpha(config);
}

} // namespace

Rational average_min_cut_exact(const NetworkConfig& config, const WeightRule& rule) {
  config.require_valid();
  require_class_rule(config, rule);
  long long total = 0;
  std::uint64_t classes = 0;
  scan_class_offsets(config, [&](long long offset) {
    total += offset;
    ++classes;
  });
  return rule_identity_min_cut(config, rule) +
         Rational(total) * rule_offset_coef(config, rule) / Rational(classes);
}

Rational min_min_cut_over_permutations(const NetworkConfig& config, const WeightRule& rule) {
  config.require_valid();
  require_class_rule(config, rule);
  long long best = -1;
  scan_class_offsets(config, [&](long long offset) {
    if (best < 0 || offset < best) best = offset;
  });
  return rule_identity_min_cut(config, rule) + Rational(best) * rule_offset_coef(config, rule);
}

Rational max_min_cut_over_permutations(const NetworkConfig& config, const WeightRule& rule) {
  config.require_valid();
  require_class_rule(config, rule);
  long long best = -1;
  scan_class_offsets(config, [&](long long offset) {
    if (offset > best) best = offset;
  });
  return rule_identity_min_cut(config, rule) + Rational(best) * rule_offset_coef(config, rule);
}

Rational max_cut_deviation(const NetworkConfig& config, const WeightRule& rule) {
  config.require_valid();
  const Rational avg = average_min_cut_exact(config, rule);
  const int n = config.n();
  if (n <= 6 && binomial_count(n, config.k_prime, kSelectionGuard) <= kSelectionGuard) {
    Rational worst = 0;
    for_each_permutation(n, [&](const Permutation& pi) {
      for_each_selection(n, config.k_prime, [&](const std::vector<NodeId>& d) {
        Rational dev = cut_value(config, rule, pi, d) - avg;
        if (dev < 0) dev = -dev;
        if (dev > worst) worst = dev;
      });
    });
    return worst;
  }
  const Rational lo = min_min_cut_over_permutations(config, rule);
  const Rational hi = max_min_cut_over_permutations(config, rule);
  const Rational up = hi - avg;
  const Rational down = avg - lo;
  return up > down ? up : down;
}

Rational smallest_beta_sum(const NetworkConfig& config) {
  return Rational(config.n() - config.k_prime) * config.beta2;
}

Permutation reverse_tail(const Permutation& pi, int tail) {
  if (tail < 0 || tail > pi.size()) throw std::invalid_argument("tail length out of range");
  std::vector<NodeId> order = pi.order();
  std::reverse(order.end() - tail, order.end());
  return Permutation(std::move(order));
}

std::uint64_t binomial_count(int n, int k, std::uint64_t guard) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n-k+i) / i stays integral; watch for overflow against guard.
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
    if (result > (guard * 2) / factor) return guard + 1;
    result = result * factor / static_cast<std::uint64_t>(i);
    if (result > guard) return guard + 1;
  }
  return result;
}

void for_each_selection(int n, int k, const std::function<void(const std::vector<NodeId>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<NodeId> current(static_cast<size_t>(k));
  std::iota(current.begin(), current.end(), 1);
  for (;;) {
    fn(current);
    int i = k - 1;
    while (i >= 0 && current[static_cast<size_t>(i)] == n - k + 1 + i) --i;
    if (i < 0) break;
    ++current[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      current[static_cast<size_t>(j)] = current[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn) {
  if (n > kPermutationGuard) {
    throw WorkLimitError("permutation sweep beyond the n! guard");
  }
  std::vector<NodeId> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  do {
    fn(Permutation(order));
  } while (std::next_permutation(order.begin(), order.end()));
}

void for_each_position_class(int n, int n1,
                             const std::function<void(const std::vector<int>&)>& fn) {
  for_each_selection(n, n1, fn);
}

} // namespace dynstore
