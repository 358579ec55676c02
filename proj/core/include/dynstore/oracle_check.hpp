#pragma once

#include "dynstore/config.hpp"
#include "dynstore/weight_rule.hpp"

#include <vector>

namespace dynstore {

struct OracleSweepResult {
  long long comparisons = 0;
  long long mismatches = 0;
  // Selections where the flow-graph min-cut is strictly below the
  // accumulation. Expected for suboptimal selections when beta1 > beta2;
  // counted separately because it demonstrates that per-selection equality
  // cannot hold in general.
  long long strict_gaps = 0;
  bool clean() const { return mismatches == 0; }

  OracleSweepResult& operator+=(const OracleSweepResult& other) {
    comparisons += other.comparisons;
    mismatches += other.mismatches;
    strict_gaps += other.strict_gaps;
    return *this;
  }
};

// Ground-truth check for one config and rule, over every permutation
// (realized by its canonical covering failure sequence) and every
// selection:
//   - the per-selection accumulation upper-bounds the flow-graph min-cut;
//   - the minima over all selections coincide exactly;
//   - the policy selection is oracle-exact.
// Exhaustive; requires n <= 8 and a modest C(n,k').
OracleSweepResult oracle_check_config(const NetworkConfig& config, const WeightRule& rule);

// Finite-alpha spot checks at the identity permutation: a binding alpha
// collapses the cut to one alpha edge per positively-contributing selected
// node, and a slack alpha reproduces the unbounded value.
OracleSweepResult oracle_check_alpha(const NetworkConfig& config);

// The full grid: n1 in {1,2,3}, n2 in {2,3,4}, n <= max_n, every valid k',
// beta1/beta2 in {1, 2, 5/2}; star plus admissible fixed-cost tilts.
OracleSweepResult oracle_equivalence_sweep(int max_n);

} // namespace dynstore
