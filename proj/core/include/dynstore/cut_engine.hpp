#pragma once

#include "dynstore/config.hpp"
#include "dynstore/permutation.hpp"
#include "dynstore/weight_rule.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dynstore {

// Raised when an exhaustive enumeration would exceed the desk-scale guards.
class WorkLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CutReport {
  Rational value;
  std::vector<NodeId> selection; // sorted by node id
  Permutation permutation;
};

enum class SelectionMode {
  Policy,     // closed-form optimal selection (rule must admit it)
  Exhaustive, // scan all C(n,k') selections; ties resolve to the
              // lexicographically smallest selection
};

// Weight of the cut that separates the selected nodes' current incarnations
// from the source side: each selected node contributes its full repair
// in-weight minus the weights received from selected nodes that failed
// earlier. Equals the flow-graph min-cut for this selection on any covering
// failure sequence realizing `pi` (the oracle-equivalence tests pin this).
Rational cut_value(const NetworkConfig& config, const WeightRule& rule,
                   const Permutation& pi, const std::vector<NodeId>& selection);

// Number of selected low-bandwidth nodes that failed no later than `node`
// (counting the node itself when it is a selected low node).
int selected_low_preceding(const NetworkConfig& config, const Permutation& pi,
                           const std::vector<NodeId>& selection, NodeId node);

// Minimizing selection: all of U plus the most recently failed low nodes.
std::vector<NodeId> min_cut_policy_selection(const NetworkConfig& config, const Permutation& pi);
// Maximizing selection: all of L plus the most recently failed high nodes.
// Requires k' >= n2.
std::vector<NodeId> max_cut_policy_selection(const NetworkConfig& config, const Permutation& pi);

CutReport min_cut(const NetworkConfig& config, const WeightRule& rule, const Permutation& pi,
                  SelectionMode mode);
CutReport max_cut(const NetworkConfig& config, const WeightRule& rule, const Permutation& pi,
                  SelectionMode mode);

// Worst-case (over permutation and selection) baseline min cut:
//   sum_{j<n1} j*beta1 + n1*n2*beta2 + sum_{j<=a} (n2-j)*beta2
// attained at the identity permutation. Confirmed by the max-flow oracle.
Rational static_min_cut(const NetworkConfig& config);

// Alternative closed form in circulation for the same constant; evaluates
// exactly n2*beta2 below static_min_cut. Kept so reports can show the
// disagreement; the oracle confirms static_min_cut.
Rational static_min_cut_alt(const NetworkConfig& config);

// Worst case over permutations of the selection-maximized cut (the
// state-aware reader). Requires k' - n2 >= 1.
Rational static_memory_cut(const NetworkConfig& config);

// Identity-permutation min cut under the tilted two-class protocol:
// static_min_cut + n1(n1-1)/2 * epsilon1.
Rational identity_min_cut(const NetworkConfig& config, const Rational& epsilon1);

// Min cut of an arbitrary permutation written as the identity value plus
// per-node positional offsets: for every selected high node, each selected
// low node failing before it adds (beta1-beta2) - (n1-1)/n2*epsilon1.
// Valid under the same admissibility condition as the selection policy.
Rational min_cut_offset_form(const NetworkConfig& config, const Rational& epsilon1,
                             const Permutation& pi);

// O(n) policy-optimal cut values for trajectory loops. Equal to
// min_cut/max_cut in policy mode (cross-checked in the tests).
Rational policy_min_cut_value(const NetworkConfig& config, const WeightRule& rule,
                              const Permutation& pi);
// Star rule; valid for k' >= n2.
Rational policy_max_cut_value(const NetworkConfig& config, const Permutation& pi);

// --- Position classes ---------------------------------------------------
// The min cut of Star and the tilted rules depends on a permutation only
// through the set of positions occupied by high nodes. Enumerating the
// C(n, n1) classes (each covering n1!*n2! permutations) makes exact
// averages over all n! permutations tractable.

// Positions (sorted, 1-based) occupied by high nodes.
std::vector<int> position_class_of(const NetworkConfig& config, const Permutation& pi);

// Integer sum over high positions of "selected low positions failing
// earlier", where the selected low positions are the last a low positions.
long long class_offset_sum(int n, int a, const std::vector<int>& u_positions);

// Per-class min-cut value for Star or a tilted rule.
Rational class_min_cut(const NetworkConfig& config, const WeightRule& rule,
                       const std::vector<int>& u_positions);

// Exact mean of the per-permutation min cut under the uniform distribution
// on all n! permutations. Throws WorkLimitError when C(n, n1) exceeds the
// enumeration guard.
Rational average_min_cut_exact(const NetworkConfig& config, const WeightRule& rule);

// Exact extremes of the per-permutation min cut, by class scan.
Rational min_min_cut_over_permutations(const NetworkConfig& config, const WeightRule& rule);
Rational max_min_cut_over_permutations(const NetworkConfig& config, const WeightRule& rule);

// Largest deviation of achievable cut values from the exact average min
// cut. Desk-scale instances (n <= 6) are scanned exhaustively over every
// permutation and selection; beyond that the class extremes of the optimal
// cut bound the deviation of the per-step minimum.
Rational max_cut_deviation(const NetworkConfig& config, const WeightRule& rule);

// Sum of the n-k' smallest node bandwidths, i.e. (n-k')*beta2.
Rational smallest_beta_sum(const NetworkConfig& config);

// Reverses the last `tail` entries; pairs each class member with its
// reflection in the average arguments.
Permutation reverse_tail(const Permutation& pi, int tail);

// --- Enumeration helpers --------------------------------------------------

// C(n, k) saturating at the guard ceiling (returns guard+1 when larger).
std::uint64_t binomial_count(int n, int k, std::uint64_t guard = UINT64_C(1) << 62);

// Sorted k-subsets of {1..n} in lexicographic order.
void for_each_selection(int n, int k, const std::function<void(const std::vector<NodeId>&)>& fn);
// All permutations of {1..n} in lexicographic order of their order vector.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn);
// Sorted n1-subsets of positions {1..n} in lexicographic order.
void for_each_position_class(int n, int n1, const std::function<void(const std::vector<int>&)>& fn);

} // namespace dynstore
