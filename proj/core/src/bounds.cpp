#include "dynstore/bounds.hpp"

#include "dynstore/chain.hpp"
#include "dynstore/cut_engine.hpp"

#include <stdexcept>

namespace dynstore {

namespace {

Rational delta(const NetworkConfig& config) { return config.beta1 - config.beta2; }

Rational integer_binom(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  return gen_binom(Rational(n), k);
}

const TwoClassFailure& two_class_or_throw(const NetworkConfig& config) {
  const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model);
  if (!tc) throw std::invalid_argument("operation requires a two-class failure model");
  return *tc;
}

} // namespace

Rational capacity_upper_bound(const NetworkConfig& config) {
  config.require_valid();
  const int n = config.n();
  const Rational mean_beta =
      (Rational(config.n1) * config.beta1 + Rational(config.n2) * config.beta2) / n;
  return Rational(config.k_prime) * (2 * n - config.k_prime - 1) / 2 * mean_beta;
}

Rational epsilon1_max(const NetworkConfig& config) {
  config.require_valid();
  if (config.n1 < 2) throw std::domain_error("epsilon1_max needs at least two high nodes");
  return Rational(config.n2) * delta(config) /
         (Rational(config.n()) * Rational(config.n1 - 1));
}

Rational protocol_lower_bound(const NetworkConfig& config, const Rational& epsilon1) {
  config.require_valid();
  if (epsilon1 < 0) throw std::domain_error("epsilon1 must be nonnegative");
  if (Rational(config.n()) * Rational(config.n1 - 1) * epsilon1 >
      Rational(config.n2) * delta(config)) {
    throw std::domain_error("epsilon1 violates the protocol admissibility condition");
  }
  return static_min_cut(config) + Rational(config.n1) * (config.n1 - 1) / 2 * epsilon1;
}

BoundPair average_cut_lower_bound(const NetworkConfig& config) {
  config.require_valid();
  const Rational c = static_min_cut(config);
  const int n = config.n();
  const int n1 = config.n1;
  const int a = config.min_low_selected();

  Rational sum = 0;
  const Rational total = integer_binom(n, a);
  for (int l = 0; l <= std::min(n1, a); ++l) {
    const Rational weight = integer_binom(n1, l) * integer_binom(config.n2, a - l) / total;
    sum += weight * Rational(l) * Rational(a + l) * delta(config) / 2;
  }

  const Rational closed =
      delta(config) / 2 * (Rational(a) * n1 / n) *
      (Rational(a + 1) + Rational(n1 - 1) * Rational(a - 1) / Rational(n - 1));
  return BoundPair{c + sum, c + closed};
}

Rational average_cut_upper_bound(const NetworkConfig& config) {
  config.require_valid();
  const int a = config.min_low_selected();
  return static_min_cut(config) +
         Rational(a) * config.n1 * (a + config.n1) * delta(config) / (2 * config.n());
}

BoundPair memory_lower_bound(const NetworkConfig& config) {
  config.require_valid();
  const int a_hat = config.min_high_selected();
  if (a_hat < 1) throw std::domain_error("memory bound needs k' - n2 >= 1");
  const Rational c = static_memory_cut(config);
  const int n = config.n();
  const int n1 = config.n1;
  const int n2 = config.n2;

  Rational sum = 0;
  const Rational total = integer_binom(n, a_hat);
  for (int l = 0; l <= std::min(n1, a_hat); ++l) {
    const Rational weight = integer_binom(n1, l) * integer_binom(n2, a_hat - l) / total;
    sum += weight * Rational(l) * Rational(2 * n2 - a_hat + l) * delta(config) / 2;
  }

  const Rational closed = delta(config) / 2 * Rational(n1) * n2 * a_hat / n *
                          (Rational(2) - Rational(a_hat - 1) / Rational(n - 1));
  return BoundPair{c + sum, c + closed};
}

Rational hetero_protocol_lower_bound(const NetworkConfig& config, const Rational& epsilon1) {
  config.require_valid();
  const auto& tc = two_class_or_throw(config);
  if (epsilon1 < 0) throw std::domain_error("epsilon1 must be nonnegative");
  if (tc.q * Rational(config.n()) * Rational(config.n1 - 1) * epsilon1 >
      tc.p * Rational(config.n2) * delta(config)) {
    throw std::domain_error("epsilon1 violates the heterogeneous admissibility condition");
  }
  return static_min_cut(config) + Rational(config.n1) * (config.n1 - 1) / 2 * epsilon1;
}

Rational hetero_expected_min_cut(const NetworkConfig& config) {
  config.require_valid();
  if (config.n1 != 1) {
    throw std::domain_error("expected min cut via block distribution needs n1 = 1");
  }
  two_class_or_throw(config);
  const BlockDistribution nu = stationary_blocks(config);
  const int n = config.n();
  const int a = config.min_low_selected();
  const Rational c = static_min_cut(config);

  Rational expected = 0;
  for (int i = 1; i <= n; ++i) {
    Rational cut = c;
    if (i > n - a) cut += Rational(i - (n - a)) * delta(config);
    expected += nu.block_probs[static_cast<size_t>(i - 1)] * cut;
  }
  return expected;
}

Rational best_lower_bound(const NetworkConfig& config) {
  config.require_valid();
  const Rational avg = average_cut_lower_bound(config).closed_form;
  Rational protocol = static_min_cut(config);
  if (config.n1 >= 2) protocol = protocol_lower_bound(config, epsilon1_max(config));
  return protocol > avg ? protocol : avg;
}

BoundsReport bounds_report(const NetworkConfig& config, std::optional<Rational> protocol_eps1,
                           std::optional<Rational> hetero_eps1) {
  config.require_valid();
  BoundsReport report;
  report.static_cut = static_min_cut(config);
  report.static_cut_alt = static_min_cut_alt(config);
  report.warnings.push_back(
      "static_cut_alt differs from static_cut by n2*beta2; the flow-graph oracle confirms static_cut");

  if (config.min_high_selected() >= 1) {
    report.memory_cut = static_memory_cut(config);
    report.memory_lb = memory_lower_bound(config);
  }

  report.capacity_ub = capacity_upper_bound(config);

  if (config.n1 >= 2) {
    report.eps1_max = epsilon1_max(config);
    report.protocol_eps1 = protocol_eps1 ? *protocol_eps1 : *report.eps1_max;
    report.protocol_lb = protocol_lower_bound(config, *report.protocol_eps1);
  } else if (protocol_eps1) {
    report.warnings.push_back("protocol tilt has no effect with a single high node");
  }

  report.average_lb = average_cut_lower_bound(config);
  report.average_ub = average_cut_upper_bound(config);

  if (const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model)) {
    if (hetero_eps1) {
      report.hetero_eps1 = hetero_eps1;
      report.hetero_lb = hetero_protocol_lower_bound(config, *hetero_eps1);
    }
    if (config.n1 == 1) {
      report.hetero_expected = hetero_expected_min_cut(config);
      if (tc->q > tc->p) {
        report.warnings.push_back(
            "two-class model has q > p; the stationary block distribution still verifies exactly");
      }
    }
  }

  report.best_lb = best_lower_bound(config);
  return report;
}

} // namespace dynstore
