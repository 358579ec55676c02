#include "dynstore/weight_rule.hpp"

#include <stdexcept>

namespace dynstore {

namespace {

const TwoClassFailure& two_class_or_throw(const NetworkConfig& config) {
  const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model);
  if (!tc) {
    throw std::invalid_argument("heterogeneous weight rule requires a two-class failure model");
  }
  return *tc;
}

} // namespace

Rational WeightRule::weight(const NetworkConfig& config, NodeId failed, NodeId helper) const {
  const int n = config.n();
  if (failed < 1 || failed > n || helper < 1 || helper > n) {
    throw std::invalid_argument("node id out of range in weight()");
  }
  if (failed == helper) return Rational(0);

  if (const auto* ex = std::get_if<ExplicitRule>(&variant_)) {
    return ex->weights.at(static_cast<size_t>(failed - 1)).at(static_cast<size_t>(helper - 1));
  }
  if (config.node_class(helper) == NodeClass::Low) return config.beta2;

  // Helper is a high node.
  if (std::holds_alternative<StarRule>(variant_)) return config.beta1;

  const bool high_failed = config.node_class(failed) == NodeClass::High;
  if (const auto* fc = std::get_if<FixedCostRule>(&variant_)) {
    if (high_failed) return config.beta1 + fc->epsilon1;
    return config.beta1 - Rational(config.n1 - 1) * fc->epsilon1 / config.n2;
  }
  const auto& hc = std::get<HeteroCostRule>(variant_);
  if (high_failed) return config.beta1 + hc.epsilon1;
  const auto& tc = two_class_or_throw(config);
  return config.beta1 - tc.q * Rational(config.n1 - 1) * hc.epsilon1 / (tc.p * config.n2);
}

std::optional<Rational> WeightRule::epsilon1() const {
  if (const auto* fc = std::get_if<FixedCostRule>(&variant_)) return fc->epsilon1;
  if (const auto* hc = std::get_if<HeteroCostRule>(&variant_)) return hc->epsilon1;
  if (std::holds_alternative<StarRule>(variant_)) return Rational(0);
  return std::nullopt;
}

bool WeightRule::policy_applies(const NetworkConfig& config) const {
  if (std::holds_alternative<StarRule>(variant_)) return true;
  if (const auto* fc = std::get_if<FixedCostRule>(&variant_)) {
    if (fc->epsilon1 < 0) return false;
    return config.beta1 - config.beta2 >=
           Rational(config.n()) * Rational(config.n1 - 1) * fc->epsilon1 / config.n2;
  }
  if (const auto* hc = std::get_if<HeteroCostRule>(&variant_)) {
    if (hc->epsilon1 < 0) return false;
    const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model);
    if (!tc) return false;
    return config.beta1 - config.beta2 >=
           tc->q * Rational(config.n()) * Rational(config.n1 - 1) * hc->epsilon1 /
               (tc->p * config.n2);
  }
  return false;
}

std::string WeightRule::name() const {
  if (is_star()) return "star";
  if (is_fixed_cost()) return "fixed-cost-epsilon";
  if (is_hetero_cost()) return "hetero-epsilon";
  return "explicit";
}

} // namespace dynstore
