#include "dynstore/config.hpp"

#include <numeric>
#include <stdexcept>

namespace dynstore {

std::vector<Rational> NetworkConfig::failure_probs() const {
  std::vector<Rational> probs(static_cast<size_t>(n()));
  if (std::holds_alternative<UniformFailure>(failure_model)) {
    const Rational share(1, n());
    for (auto& p : probs) p = share;
  } else if (const auto* tc = std::get_if<TwoClassFailure>(&failure_model)) {
    for (int v = 1; v <= n(); ++v) {
      probs[v - 1] = node_class(v) == NodeClass::High ? tc->q : tc->p;
    }
  } else {
    const auto& per = std::get<PerNodeFailure>(failure_model).probs;
    if (static_cast<int>(per.size()) != n()) {
      throw std::invalid_argument("per-node failure probabilities must have one entry per node");
    }
    probs = per;
  }
  return probs;
}

std::vector<std::string> NetworkConfig::validate() const {
  std::vector<std::string> violations;
  if (n1 < 1) violations.push_back("n1 >= 1");
  if (n2 < 2) violations.push_back("n2 >= 2");
  if (!(beta2 > 0)) violations.push_back("beta2 > 0");
  if (beta1 < beta2) violations.push_back("beta1 >= beta2");
  if (k_prime <= n1) violations.push_back("k' > n1 (every retrieval set needs a low node)");
  if (k_prime > n1 + n2) violations.push_back("k' <= n");
  if (alpha && !(*alpha > 0)) violations.push_back("alpha > 0");
  if (lambda && !(*lambda > 0)) violations.push_back("lambda > 0");

  if (const auto* tc = std::get_if<TwoClassFailure>(&failure_model)) {
    if (!(tc->p > 0) || !(tc->q > 0)) violations.push_back("two-class p, q > 0");
    if (Rational(n1) * tc->q + Rational(n2) * tc->p != 1) {
      violations.push_back("n1*q + n2*p = 1");
    }
  } else if (const auto* pn = std::get_if<PerNodeFailure>(&failure_model)) {
    if (static_cast<int>(pn->probs.size()) != n1 + n2) {
      violations.push_back("per-node probabilities: one entry per node");
    } else {
      Rational sum = 0;
      bool positive = true;
      for (const auto& p : pn->probs) {
        if (!(p > 0)) positive = false;
        sum += p;
      }
      if (!positive) violations.push_back("per-node probabilities positive");
      if (sum != 1) violations.push_back("per-node probabilities sum to 1");
    }
  }
  return violations;
}

void NetworkConfig::require_valid() const {
  const auto violations = validate();
  if (violations.empty()) return;
  std::string msg = "invalid network config:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw std::invalid_argument(msg);
}

DerivedParams derived_params(const NetworkConfig& config) {
  return DerivedParams{config.n(), config.min_low_selected(), config.min_high_selected()};
}

NetworkConfig preset_cfg_a() {
  NetworkConfig cfg;
  cfg.n1 = 10;
  cfg.n2 = 10;
  cfg.beta1 = 2;
  cfg.beta2 = 1;
  cfg.k_prime = 13;
  cfg.lambda = 1;
  return cfg;
}

NetworkConfig preset_cfg_b() {
  NetworkConfig cfg;
  cfg.n1 = 2;
  cfg.n2 = 3;
  cfg.beta1 = 2;
  cfg.beta2 = 1;
  cfg.k_prime = 4;
  cfg.lambda = 1;
  return cfg;
}

NetworkConfig preset_cfg_c() {
  NetworkConfig cfg;
  cfg.n1 = 1;
  cfg.n2 = 19;
  cfg.beta1 = 2;
  cfg.beta2 = 1;
  cfg.k_prime = 13;
  cfg.failure_model = TwoClassFailure{Rational(4, 95), Rational(1, 5)};
  cfg.lambda = 1;
  return cfg;
}

} // namespace dynstore
