#pragma once

#include "dynstore/rational.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dynstore {

// Storage nodes are identified by integers 1..n. Nodes 1..n1 form the
// high-bandwidth class U, nodes n1+1..n the low-bandwidth class L.
using NodeId = int;

enum class NodeClass { High, Low };

struct UniformFailure {
  bool operator==(const UniformFailure&) const = default;
};

// Per-failure probabilities: q for each high node, p for each low node.
struct TwoClassFailure {
  Rational p;
  Rational q;
  bool operator==(const TwoClassFailure&) const = default;
};

struct PerNodeFailure {
  std::vector<Rational> probs; // indexed by node id - 1
  bool operator==(const PerNodeFailure&) const = default;
};

using FailureModel = std::variant<UniformFailure, TwoClassFailure, PerNodeFailure>;

// Static description of a two-class storage network. Immutable value type;
// all operations in the library take it by const reference.
struct NetworkConfig {
  int n1 = 0;                     // high-bandwidth node count, >= 1
  int n2 = 0;                     // low-bandwidth node count, >= 2
  Rational beta1;                 // symbols per repair sent by a high node
  Rational beta2;                 // symbols per repair sent by a low node
  int k_prime = 0;                // active nodes sufficient to read the file
  std::optional<Rational> alpha;  // node storage capacity; absent = unbounded
  FailureModel failure_model = UniformFailure{};
  std::optional<Rational> lambda; // continuous-time per-node failure rate

  int n() const { return n1 + n2; }

  // Low nodes every retrieval set must contain beyond all of U (k' - n1).
  int min_low_selected() const { return k_prime - n1; }
  // High nodes every retrieval set must contain beyond all of L (k' - n2).
  // May be negative; the state-aware operations require it >= 0.
  int min_high_selected() const { return k_prime - n2; }

  NodeClass node_class(NodeId v) const {
    return v <= n1 ? NodeClass::High : NodeClass::Low;
  }
  const Rational& beta(NodeId v) const {
    return v <= n1 ? beta1 : beta2;
  }

  // Per-node failure probabilities, normalized to sum to 1.
  std::vector<Rational> failure_probs() const;

  // Returns every violated invariant; empty iff the config is valid.
  std::vector<std::string> validate() const;
  // Throws std::invalid_argument listing all violations.
  void require_valid() const;

  bool operator==(const NetworkConfig&) const = default;
};

struct DerivedParams {
  int n = 0;
  int a = 0;     // k' - n1
  int a_hat = 0; // k' - n2
};

DerivedParams derived_params(const NetworkConfig& config);

// Reference configurations used throughout the tests and the CLI presets.

// n1=10, n2=10, beta1=2, beta2=1, k'=13, uniform failures.
NetworkConfig preset_cfg_a();
// n1=2, n2=3, beta1=2, beta2=1, k'=4, uniform failures.
NetworkConfig preset_cfg_b();
// n1=1, n2=19, beta1=2, beta2=1, k'=13, two-class failures p=4/95, q=1/5.
NetworkConfig preset_cfg_c();

} // namespace dynstore
