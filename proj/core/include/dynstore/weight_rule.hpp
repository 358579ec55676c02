#pragma once

#include "dynstore/config.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dynstore {

// weight(failed, helper) = symbols the helper transmits for that repair.
// Every rule is zero on the diagonal: the failed node sends nothing for
// its own repair.

// Baseline: every helper sends exactly its class bandwidth.
struct StarRule {};

// Two-class protocol with a single tilt parameter. When a high node fails,
// high helpers send beta1 + eps1; when a low node fails, high helpers send
// beta1 - (n1-1)*eps1/n2. Low helpers always send beta2. The tilt averages
// out to the class bandwidths under uniform failures.
struct FixedCostRule {
  Rational epsilon1;
};

// Variant of FixedCostRule for two-class failure probabilities (p for low,
// q for high): the compensation on low-node failures is scaled by q/p so
// the long-run average still meets the bandwidth constraint.
struct HeteroCostRule {
  Rational epsilon1;
};

// Arbitrary nonnegative matrix, weights[failed-1][helper-1].
struct ExplicitRule {
  std::vector<std::vector<Rational>> weights;
};

class WeightRule {
 public:
  static WeightRule star() { return WeightRule(StarRule{}); }
  static WeightRule fixed_cost(Rational epsilon1) {
    return WeightRule(FixedCostRule{std::move(epsilon1)});
  }
  static WeightRule hetero_cost(Rational epsilon1) {
    return WeightRule(HeteroCostRule{std::move(epsilon1)});
  }
  static WeightRule explicit_matrix(std::vector<std::vector<Rational>> weights) {
    return WeightRule(ExplicitRule{std::move(weights)});
  }

  Rational weight(const NetworkConfig& config, NodeId failed, NodeId helper) const;

  bool is_star() const { return std::holds_alternative<StarRule>(variant_); }
  bool is_fixed_cost() const { return std::holds_alternative<FixedCostRule>(variant_); }
  bool is_hetero_cost() const { return std::holds_alternative<HeteroCostRule>(variant_); }
  bool is_explicit() const { return std::holds_alternative<ExplicitRule>(variant_); }

  std::optional<Rational> epsilon1() const;

  // True when the greedy selection policies (all of U first for the minimum
  // cut) are provably optimal for this rule: Star always; the epsilon rules
  // when the tilt keeps beta1-side weights at least beta2-side weights,
  // i.e. beta1 - beta2 >= n(n1-1)/n2 * eps1 (scaled by q/p for the
  // heterogeneous variant).
  bool policy_applies(const NetworkConfig& config) const;

  std::string name() const;

 private:
  using Variant = std::variant<StarRule, FixedCostRule, HeteroCostRule, ExplicitRule>;
  explicit WeightRule(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
};

} // namespace dynstore
