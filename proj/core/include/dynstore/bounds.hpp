#pragma once

#include "dynstore/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dynstore {

// A bound stated both as a hypergeometric sum and as its Vandermonde-closed
// form; the two must agree exactly.
struct BoundPair {
  Rational sum_form;
  Rational closed_form;
};

// Averaging upper bound on the capacity: k'(2n-k'-1)/2 * mean(beta).
Rational capacity_upper_bound(const NetworkConfig& config);

// Largest protocol tilt that keeps the greedy selection policy optimal:
// n2(beta1-beta2) / (n(n1-1)). Requires n1 >= 2.
Rational epsilon1_max(const NetworkConfig& config);

// Capacity lower bound of the tilted protocol: C + n1(n1-1)/2 * epsilon1.
// epsilon1 must satisfy the admissibility condition (see epsilon1_max).
Rational protocol_lower_bound(const NetworkConfig& config, const Rational& epsilon1);

// Lower bound on the average min cut over the stationary (uniform) state:
// sum form weights l(a+l)(beta1-beta2)/2 by the hypergeometric law of the
// high-node count in the last a positions; closed form
// C + (beta1-beta2)/2 * (a n1/n) (a+1 + (n1-1)(a-1)/(n-1)).
BoundPair average_cut_lower_bound(const NetworkConfig& config);

// Matching upper bound: C + a n1 (a+n1)(beta1-beta2) / (2n).
Rational average_cut_upper_bound(const NetworkConfig& config);

// State-aware (cut-maximizing reader) lower bound: sum form weights
// l(2n2-a_hat+l)(beta1-beta2)/2; closed form
// C' + (beta1-beta2)/2 * n1 n2 a_hat / n * (2 - (a_hat-1)/(n-1)).
// Requires k' - n2 >= 1.
BoundPair memory_lower_bound(const NetworkConfig& config);

// Two-class failure probabilities (q per high node, p per low node): the
// tilt admissibility becomes beta1-beta2 >= q n (n1-1) eps1 / (p n2) and the
// bound is again C + n1(n1-1)/2 * epsilon1.
Rational hetero_protocol_lower_bound(const NetworkConfig& config, const Rational& epsilon1);

// Exact stationary expectation of the min cut for n1 = 1 under two-class
// failures: the block distribution weighs position-dependent cut values
// C + max(0, i - (n-a)) * (beta1-beta2).
Rational hetero_expected_min_cut(const NetworkConfig& config);

// max(protocol bound at epsilon1_max, closed-form average bound).
Rational best_lower_bound(const NetworkConfig& config);

struct BoundsReport {
  Rational static_cut;
  Rational static_cut_alt;
  std::optional<Rational> memory_cut;

  Rational capacity_ub;
  std::optional<Rational> eps1_max;
  std::optional<Rational> protocol_eps1; // tilt used for protocol_lb
  std::optional<Rational> protocol_lb;
  BoundPair average_lb;
  Rational average_ub;
  std::optional<BoundPair> memory_lb;
  std::optional<Rational> hetero_eps1;
  std::optional<Rational> hetero_lb;
  std::optional<Rational> hetero_expected;
  Rational best_lb;

  std::vector<std::string> warnings;
};

// Evaluates every applicable bound. `protocol_eps1` defaults to
// epsilon1_max when n1 >= 2; `hetero_eps1` applies only to two-class
// configs.
BoundsReport bounds_report(const NetworkConfig& config,
                           std::optional<Rational> protocol_eps1 = std::nullopt,
                           std::optional<Rational> hetero_eps1 = std::nullopt);

} // namespace dynstore
