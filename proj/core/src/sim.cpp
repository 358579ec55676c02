#include "dynstore/sim.hpp"

#include "dynstore/chain.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace dynstore {

namespace {

double exp_sample(std::mt19937_64& rng, double rate) {
  // u in (0, 1]
  const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
  return -std::log(u) / rate;
}

struct EngineOptions {
  long steps = 0;
  std::uint64_t seed = 0;
  long burn_in = 0;
  CutMode mode = CutMode::Min;
  bool continuous = false;
  std::optional<Rational> adaptive_target;
  bool keep_steps = true;
};

TrajectoryStats run_engine(const NetworkConfig& config, const WeightRule& rule,
                           const EngineOptions& opt) {
  config.require_valid();
  if (opt.steps <= opt.burn_in || opt.burn_in < 0) {
    throw std::invalid_argument("need steps > burn_in >= 0");
  }
  if (opt.mode == CutMode::Max) {
    if (!rule.is_star()) throw std::domain_error("max-cut trajectories use the star rule");
    if (config.min_high_selected() < 0) throw std::domain_error("max-cut mode needs k' >= n2");
  } else if (!rule.policy_applies(config)) {
    throw std::domain_error("rule does not admit the selection policy");
  }
  double rate = 0;
  if (opt.continuous) {
    if (!config.lambda) throw std::invalid_argument("continuous runs need lambda");
    rate = to_double(*config.lambda) * config.n();
  }

  const int n = config.n();
  TrajectoryStats stats;
  stats.steps = opt.steps;
  stats.burn_in = opt.burn_in;
  stats.mode = opt.mode;
  stats.seed = opt.seed;
  stats.per_node_sent.assign(static_cast<size_t>(n), NodeLedger{Rational(0), 0.0, 0});
  if (opt.keep_steps) stats.per_step.reserve(static_cast<size_t>(opt.steps));

  FailureSampler sampler(config, derive_seed(opt.seed, 0));
  std::mt19937_64 holding_rng(derive_seed(opt.seed, 1));

  // Per-node transmissions depend only on the failed node, not the state.
  std::vector<std::vector<Rational>> send(static_cast<size_t>(n + 1));
  for (NodeId failed = 1; failed <= n; ++failed) {
    auto& row = send[static_cast<size_t>(failed)];
    row.reserve(static_cast<size_t>(n));
    for (NodeId helper = 1; helper <= n; ++helper) {
      row.push_back(rule.weight(config, failed, helper));
    }
  }

  Permutation pi = Permutation::identity(n);
  Rational cut_sum = 0;
  long audited = 0;
  double weighted_cut_sum = 0, weight_sum = 0;

  const long audit_span = opt.steps - opt.burn_in;
  const int batch_count = audit_span >= 200 ? 100 : 1;
  const long batch_len = audit_span / batch_count;
  std::vector<double> batch_sums;
  std::vector<long> batch_lens;
  double step_sq_sum = 0;

  for (long step = 1; step <= opt.steps; ++step) {
    const NodeId failed = sampler.next();
    pi = apply_failure(pi, failed);

    Rational base_cut = opt.mode == CutMode::Min ? policy_min_cut_value(config, rule, pi)
                                                 : policy_max_cut_value(config, pi);
    std::optional<Rational> epsilon;
    Rational cut = base_cut;
    if (opt.adaptive_target) {
      Rational eps = *opt.adaptive_target / base_cut - 1;
      if (eps < -1) eps = -1;
      cut = (1 + eps) * base_cut;
      epsilon = std::move(eps);
    }

    const double holding = opt.continuous ? exp_sample(holding_rng, rate) : 1.0;

    if (step > opt.burn_in) {
      cut_sum += cut;
      ++audited;
      const double cut_d = to_double(cut);
      step_sq_sum += cut_d * cut_d;
      if (opt.continuous) {
        weighted_cut_sum += holding * cut_d;
        weight_sum += holding;
      }
      const long batch = std::min<long>((audited - 1) / std::max<long>(batch_len, 1),
                                        batch_count - 1);
      if (batch >= static_cast<long>(batch_sums.size())) {
        batch_sums.resize(static_cast<size_t>(batch) + 1, 0.0);
        batch_lens.resize(static_cast<size_t>(batch) + 1, 0);
      }
      batch_sums[static_cast<size_t>(batch)] += cut_d;
      ++batch_lens[static_cast<size_t>(batch)];

      const Rational scale = epsilon ? (1 + *epsilon) : Rational(1);
      for (NodeId helper = 1; helper <= n; ++helper) {
        if (helper == failed) continue;
        const Rational& w = send[static_cast<size_t>(failed)][static_cast<size_t>(helper - 1)];
        if (w == 0 && !epsilon) {
          ++stats.per_node_sent[static_cast<size_t>(helper - 1)].events;
          continue;
        }
        Rational sent = epsilon ? scale * w : w;
        auto& ledger = stats.per_node_sent[static_cast<size_t>(helper - 1)];
        const double sent_d = to_double(sent);
        ledger.total_sent += sent;
        ledger.total_sent_sq += sent_d * sent_d;
        ++ledger.events;
      }
    }

    if (opt.keep_steps) stats.per_step.push_back(StepRecord{failed, std::move(cut), std::move(epsilon)});
  }

  stats.running_avg_cut = cut_sum / audited;

  const double mean = to_double(stats.running_avg_cut);
  if (batch_sums.size() >= 2) {
    double var = 0;
    long used = 0;
    for (size_t b = 0; b < batch_sums.size(); ++b) {
      if (batch_lens[b] == 0) continue;
      const double bm = batch_sums[b] / static_cast<double>(batch_lens[b]);
      var += (bm - mean) * (bm - mean);
      ++used;
    }
    if (used >= 2) {
      var /= static_cast<double>(used - 1);
      stats.stderr_avg = std::sqrt(var / static_cast<double>(used));
    }
  } else {
    const double var = std::max(0.0, step_sq_sum / static_cast<double>(audited) - mean * mean);
    stats.stderr_avg = std::sqrt(var / static_cast<double>(audited));
  }

  if (opt.continuous && weight_sum > 0) {
    stats.time_avg_cut = weighted_cut_sum / weight_sum;
  }
  return stats;
}

} // namespace

long default_burn_in(const NetworkConfig& config) {
  const int n = config.n();
  return static_cast<long>(std::ceil(n * std::log(n) + 3.0 * n));
}

TrajectoryStats run_discrete(const NetworkConfig& config, const WeightRule& rule, long steps,
                             std::uint64_t seed, std::optional<long> burn_in, CutMode mode) {
  EngineOptions opt;
  opt.steps = steps;
  opt.seed = seed;
  opt.burn_in = burn_in ? *burn_in : default_burn_in(config);
  opt.mode = mode;
  return run_engine(config, rule, opt);
}

TrajectoryStats run_continuous(const NetworkConfig& config, const WeightRule& rule, long events,
                               std::uint64_t seed, std::optional<long> burn_in) {
  EngineOptions opt;
  opt.steps = events;
  opt.seed = seed;
  opt.burn_in = burn_in ? *burn_in : default_burn_in(config);
  opt.continuous = true;
  return run_engine(config, rule, opt);
}

TrajectoryStats adaptive_run(const NetworkConfig& config, const Rational& target, long steps,
                             std::uint64_t seed, std::optional<long> burn_in) {
  const WeightRule star = WeightRule::star();
  const Rational avg = average_min_cut_exact(config, star);
  if (target > avg) {
    throw std::domain_error("adaptive target exceeds the exact average min cut");
  }

  EngineOptions opt;
  opt.steps = steps;
  opt.seed = seed;
  opt.burn_in = burn_in ? *burn_in : default_burn_in(config);
  opt.adaptive_target = target;
  TrajectoryStats stats = run_engine(config, star, opt);

  const Rational dev = max_cut_deviation(config, star);
  if (smallest_beta_sum(config) < dev) {
    stats.warnings.push_back(
        "cut deviation " + to_fraction_string(dev) + " exceeds the spare bandwidth " +
        to_fraction_string(smallest_beta_sum(config)) +
        " of the n-k' cheapest nodes; the scaling protocol is best-effort here");
  }
  return stats;
}

AuditReport bandwidth_audit(const TrajectoryStats& stats, const NetworkConfig& config) {
  config.require_valid();
  AuditReport report;
  const long steps = stats.steps - stats.burn_in;
  report.steps = steps;
  report.pass = true;
  for (NodeId v = 1; v <= config.n(); ++v) {
    const auto& ledger = stats.per_node_sent[static_cast<size_t>(v - 1)];
    AuditRow row;
    row.node = v;
    row.node_class = config.node_class(v);
    row.events = ledger.events;
    row.total_sent = ledger.total_sent;
    row.beta = config.beta(v);
    row.per_event_avg = ledger.events > 0 ? ledger.total_sent / ledger.events : Rational(0);
    row.per_step_avg = steps > 0 ? ledger.total_sent / steps : Rational(0);

    const double mean = steps > 0 ? to_double(row.per_step_avg) : 0.0;
    const double var =
        steps > 0 ? std::max(0.0, ledger.total_sent_sq / static_cast<double>(steps) - mean * mean)
                  : 0.0;
    row.slack = 3.0 * std::sqrt(var / std::max<double>(1.0, static_cast<double>(steps)));

    row.ok = row.per_step_avg <= row.beta ||
             mean <= to_double(row.beta) + row.slack;
    const double event_mean = to_double(row.per_event_avg);
    const double event_slack = row.events > 0 ? row.slack * static_cast<double>(steps) /
                                                    static_cast<double>(row.events)
                                              : 0.0;
    row.ok_per_event = row.per_event_avg <= row.beta ||
                       event_mean <= to_double(row.beta) + event_slack;
    report.pass = report.pass && row.ok;
    report.rows.push_back(std::move(row));
  }
  return report;
}

int worker_thread_cap() {
  if (const char* env = std::getenv("DYNSTORE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

AvgCutEstimate estimate_avg_cut(const NetworkConfig& config, const WeightRule& rule, long steps,
                                int replicas, std::uint64_t seed, CutMode mode) {
  if (replicas < 1) throw std::invalid_argument("need at least one replica");

  std::vector<double> means(static_cast<size_t>(replicas), 0.0);
  std::vector<double> stderrs(static_cast<size_t>(replicas), 0.0);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= replicas) break;
      EngineOptions opt;
      opt.steps = steps;
      opt.seed = derive_seed(seed, static_cast<std::uint64_t>(r) + 2);
      opt.burn_in = default_burn_in(config);
      opt.mode = mode;
      opt.keep_steps = false;
      const TrajectoryStats stats = run_engine(config, rule, opt);
      means[static_cast<size_t>(r)] = to_double(stats.running_avg_cut);
      stderrs[static_cast<size_t>(r)] = stats.stderr_avg;
    }
  };

  const int threads = std::min(replicas, worker_thread_cap());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  AvgCutEstimate estimate;
  estimate.replica_means = means;
  double sum = 0;
  for (double m : means) sum += m;
  estimate.mean = sum / static_cast<double>(replicas);
  if (replicas >= 2) {
    double var = 0;
    for (double m : means) var += (m - estimate.mean) * (m - estimate.mean);
    var /= static_cast<double>(replicas - 1);
    estimate.stderr_mean = std::sqrt(var / static_cast<double>(replicas));
  } else {
    estimate.stderr_mean = stderrs[0];
  }
  return estimate;
}

} // namespace dynstore
