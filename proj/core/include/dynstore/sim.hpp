#pragma once

#include "dynstore/config.hpp"
#include "dynstore/cut_engine.hpp"
#include "dynstore/weight_rule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dynstore {

enum class CutMode { Min, Max };

struct StepRecord {
  NodeId failed = 0;
  Rational cut;
  std::optional<Rational> epsilon; // adaptive runs only
};

struct NodeLedger {
  Rational total_sent;   // symbols sent over the audited steps
  double total_sent_sq = 0; // sum of squared per-step sends, for slack estimates
  long events = 0;       // repair events helped
};

struct TrajectoryStats {
  long steps = 0;
  long burn_in = 0;
  CutMode mode = CutMode::Min;
  std::uint64_t seed = 0;
  std::vector<StepRecord> per_step;      // all steps, including burn-in
  Rational running_avg_cut;              // exact mean of post-burn-in cuts
  double stderr_avg = 0;                 // batch-means standard error of the mean
  std::vector<NodeLedger> per_node_sent; // audited (post-burn-in) ledger
  std::optional<double> time_avg_cut;    // holding-time-weighted mean (continuous runs)
  std::vector<std::string> warnings;
};

// Mixing-based default: ceil(n ln n + 3n) steps.
long default_burn_in(const NetworkConfig& config);

// Discrete-time trajectory from the identity state. At every step a node
// fails per the failure model, moves to the back of the permutation, and
// the policy-optimal cut (minimizing, or maximizing in Max mode) is
// recorded. Max mode requires the star rule and k' >= n2.
TrajectoryStats run_discrete(const NetworkConfig& config, const WeightRule& rule, long steps,
                             std::uint64_t seed, std::optional<long> burn_in = std::nullopt,
                             CutMode mode = CutMode::Min);

// Continuous-time variant: the same failure chain with i.i.d. Exp(n*lambda)
// holding times; `events` failures are simulated and the cut average is
// weighted by holding time. Requires lambda. The failure stream matches
// run_discrete at the same seed.
TrajectoryStats run_continuous(const NetworkConfig& config, const WeightRule& rule, long events,
                               std::uint64_t seed, std::optional<long> burn_in = std::nullopt);

// Weight-scaling protocol: at each step every helper transmits
// (1+eps_j) * beta, with eps_j = target / (star min cut) - 1, so the step's
// min cut equals `target` exactly. Requires target <= the exact average min
// cut; emits a warning when the worst-case cut deviation exceeds the spare
// bandwidth of the n-k' cheapest nodes.
TrajectoryStats adaptive_run(const NetworkConfig& config, const Rational& target, long steps,
                             std::uint64_t seed, std::optional<long> burn_in = std::nullopt);

struct AuditRow {
  NodeId node = 0;
  NodeClass node_class = NodeClass::High;
  long events = 0;
  Rational total_sent;
  Rational per_event_avg; // total sent / events helped
  Rational per_step_avg;  // total sent / audited steps
  Rational beta;
  double slack = 0;       // 3 sigma sampling slack on the per-step mean
  bool ok = false;        // per-step average within beta + slack
  bool ok_per_event = false;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  long steps = 0;
  bool pass = false; // all rows ok
};

// Checks the long-run bandwidth constraint: each node's audited send per
// step must stay within its beta, up to 3 sigma of sampling slack.
AuditReport bandwidth_audit(const TrajectoryStats& stats, const NetworkConfig& config);

struct AvgCutEstimate {
  double mean = 0;
  double stderr_mean = 0;
  std::vector<double> replica_means;
};

// Monte Carlo average cut over independent replicas with derived seeds.
// Replicas run in parallel, capped by DYNSTORE_THREADS.
AvgCutEstimate estimate_avg_cut(const NetworkConfig& config, const WeightRule& rule, long steps,
                                int replicas, std::uint64_t seed, CutMode mode = CutMode::Min);

int worker_thread_cap();

} // namespace dynstore
