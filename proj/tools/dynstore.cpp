// Command-line harness for the dynamical storage model: capacity bounds,
// exact cut computations, Monte Carlo trajectories, mixing certificates and
// the flow-graph oracle cross-check.

#include "dynstore/bounds.hpp"
#include "dynstore/chain.hpp"
#include "dynstore/config.hpp"
#include "dynstore/cut_engine.hpp"
#include "dynstore/flow_graph.hpp"
#include "dynstore/io.hpp"
#include "dynstore/oracle_check.hpp"
#include "dynstore/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dynstore;

namespace {

constexpr int kExitInvalidInput = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 12345;
  std::string out_dir;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
  cmd->add_option("--config", opts.config_path, "path to a JSON network config");
  cmd->add_option("--preset", opts.preset, "built-in config: a, b or c")
      ->check(CLI::IsMember({"a", "b", "c", "cfg_a", "cfg_b", "cfg_c"}));
  cmd->add_option("--seed", opts.seed, "root RNG seed");
  cmd->add_option("--out", opts.out_dir, "directory for output files");
  if (with_format) {
    cmd->add_option("--format", opts.format, "stdout format")
        ->check(CLI::IsMember({"json", "csv"}));
  }
}

NetworkConfig resolve_config(const CommonOpts& opts) {
  if (!opts.config_path.empty() && !opts.preset.empty()) {
    throw std::invalid_argument("give either --config or --preset, not both");
  }
  if (!opts.config_path.empty()) return load_config_file(opts.config_path);
  if (!opts.preset.empty()) return preset_by_name(opts.preset);
  throw std::invalid_argument("a config is required: pass --config PATH or --preset {a,b,c}");
}

std::string config_source(const CommonOpts& opts) {
  if (!opts.config_path.empty()) return opts.config_path;
  return "preset:" + opts.preset;
}

RunManifest make_manifest(const CommonOpts& opts, const std::string& subcommand,
                          const std::string& flags) {
  RunManifest manifest;
  manifest.config_source = config_source(opts);
  manifest.subcommand = subcommand;
  manifest.flags = flags;
  manifest.seed = opts.seed;
  manifest.timestamp = current_timestamp_utc();
  return manifest;
}

void write_file(const std::string& out_dir, const std::string& name, const std::string& body) {
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  std::cerr << "wrote " << path.string() << '\n';
}

// The worked-example tilt shipped with preset a.
std::optional<Rational> preset_default_tilt(const std::string& preset) {
  if (preset == "a" || preset == "cfg_a") return Rational(1, 20);
  return std::nullopt;
}

int cmd_bounds(const CommonOpts& opts, const std::string& eps1_text,
               const std::string& hetero_eps1_text) {
  const NetworkConfig config = resolve_config(opts);
  std::optional<Rational> eps1;
  if (!eps1_text.empty()) eps1 = parse_rational(eps1_text);
  else if (!opts.preset.empty()) eps1 = preset_default_tilt(opts.preset);
  std::optional<Rational> hetero_eps1;
  if (!hetero_eps1_text.empty()) hetero_eps1 = parse_rational(hetero_eps1_text);

  const BoundsReport report = bounds_report(config, eps1, hetero_eps1);
  const auto checks = opts.preset.empty() ? std::vector<ReferenceCheck>{}
                                          : reference_checks(opts.preset, report);
  const RunManifest manifest = make_manifest(opts, "bounds", "epsilon1=" + eps1_text);

  const std::string json_body = bounds_report_json(report, config, manifest, checks);
  std::ostringstream csv_body;
  bounds_report_csv(csv_body, report, manifest, checks);

  std::cout << (opts.format == "csv" ? csv_body.str() : json_body + "\n");
  if (!opts.out_dir.empty()) {
    write_file(opts.out_dir, "bounds.json", json_body + "\n");
    write_file(opts.out_dir, "bounds.csv", csv_body.str());
  }
  return 0;
}

// Renders quantity rows as CSV (with the manifest comment) or as a JSON
// object keyed by quantity.
std::string render_rows(const std::vector<std::pair<std::string, Rational>>& rows,
                        const RunManifest& manifest, const std::string& format) {
  if (format == "json") {
    nlohmann::json j;
    j["manifest"] = {{"config", manifest.config_source}, {"subcommand", manifest.subcommand},
                     {"flags", manifest.flags},          {"seed", manifest.seed},
                     {"version", manifest.version},      {"timestamp", manifest.timestamp}};
    for (const auto& [name, value] : rows) {
      j[name] = {{"fraction", to_fraction_string(value)}, {"decimal", to_decimal_string(value)}};
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << manifest_comment(manifest) << "quantity,fraction,decimal\n";
  for (const auto& [name, value] : rows) {
    csv << name << ',' << to_fraction_string(value) << ',' << to_decimal_string(value) << '\n';
  }
  return csv.str();
}

int cmd_static_cut(const CommonOpts& opts, const std::string& eps1_text) {
  const NetworkConfig config = resolve_config(opts);
  const RunManifest manifest = make_manifest(opts, "static-cut", "epsilon1=" + eps1_text);

  std::vector<std::pair<std::string, Rational>> rows;
  rows.emplace_back("static_cut", static_min_cut(config));
  rows.emplace_back("static_cut_alt", static_min_cut_alt(config));
  if (config.min_high_selected() >= 1) rows.emplace_back("memory_cut", static_memory_cut(config));
  if (!eps1_text.empty()) {
    const Rational eps1 = parse_rational(eps1_text);
    rows.emplace_back("protocol_identity_cut", identity_min_cut(config, eps1));
    rows.emplace_back("protocol_worst_state_cut",
                      min_min_cut_over_permutations(config, WeightRule::fixed_cost(eps1)));
  }
  const std::string body = render_rows(rows, manifest, opts.format);
  std::cout << body;
  if (!opts.out_dir.empty()) {
    write_file(opts.out_dir, opts.format == "json" ? "static_cut.json" : "static_cut.csv", body);
  }
  return 0;
}

int cmd_avg_cut(const CommonOpts& opts, const std::string& rule_name,
                const std::string& eps1_text) {
  const NetworkConfig config = resolve_config(opts);
  WeightRule rule = WeightRule::star();
  if (rule_name == "eps") {
    if (eps1_text.empty()) throw std::invalid_argument("--rule eps needs --epsilon1");
    rule = WeightRule::fixed_cost(parse_rational(eps1_text));
  }
  const RunManifest manifest = make_manifest(opts, "avg-cut", "rule=" + rule_name);

  const Rational avg = average_min_cut_exact(config, rule);
  const BoundPair lb = average_cut_lower_bound(config);
  const Rational ub = average_cut_upper_bound(config);
  const bool contained = rule.is_star() && lb.closed_form <= avg && avg <= ub;

  std::vector<std::pair<std::string, Rational>> rows;
  rows.emplace_back("average_min_cut", avg);
  rows.emplace_back("average_lower_bound", lb.closed_form);
  rows.emplace_back("average_upper_bound", ub);
  rows.emplace_back("in_sandwich", Rational(contained ? 1 : 0));
  const std::string body = render_rows(rows, manifest, opts.format);
  std::cout << body;
  if (!opts.out_dir.empty()) {
    write_file(opts.out_dir, opts.format == "json" ? "avg_cut.json" : "avg_cut.csv", body);
  }
  return rule.is_star() && !contained ? kExitCheckFailed : 0;
}

int cmd_simulate(const CommonOpts& opts, const std::string& rule_name,
                 const std::string& eps1_text, const std::string& target_text, long steps,
                 int replicas, const std::string& mode_name, long burn_in_flag, bool continuous,
                 const std::string& lambda_text) {
  NetworkConfig config = resolve_config(opts);
  if (!lambda_text.empty()) config.lambda = parse_rational(lambda_text);
  const CutMode mode = mode_name == "max" ? CutMode::Max : CutMode::Min;
  std::optional<long> burn_in;
  if (burn_in_flag >= 0) burn_in = burn_in_flag;

  std::ostringstream flags;
  flags << "rule=" << rule_name << " steps=" << steps << " mode=" << mode_name
        << " replicas=" << replicas << (continuous ? " continuous" : "");
  const RunManifest manifest = make_manifest(opts, "simulate", flags.str());

  WeightRule rule = WeightRule::star();
  bool adaptive = false;
  if (rule_name == "eps") {
    if (eps1_text.empty()) throw std::invalid_argument("--rule eps needs --epsilon1");
    rule = WeightRule::fixed_cost(parse_rational(eps1_text));
  } else if (rule_name == "hetero") {
    if (eps1_text.empty()) throw std::invalid_argument("--rule hetero needs --epsilon1");
    rule = WeightRule::hetero_cost(parse_rational(eps1_text));
  } else if (rule_name == "adaptive") {
    adaptive = true;
  }

  if (replicas > 1) {
    if (adaptive || continuous) {
      throw std::invalid_argument("replica estimation supports the plain discrete rules");
    }
    const AvgCutEstimate estimate = estimate_avg_cut(config, rule, steps, replicas, opts.seed, mode);
    std::cout << "replicas=" << replicas << " steps=" << steps << " mean=" << estimate.mean
              << " stderr=" << estimate.stderr_mean << '\n';
    return 0;
  }

  TrajectoryStats stats;
  if (adaptive) {
    const Rational target = target_text.empty()
                                ? average_min_cut_exact(config, WeightRule::star())
                                : parse_rational(target_text);
    stats = adaptive_run(config, target, steps, opts.seed, burn_in);
  } else if (continuous) {
    stats = run_continuous(config, rule, steps, opts.seed, burn_in);
  } else {
    stats = run_discrete(config, rule, steps, opts.seed, burn_in, mode);
  }
  const AuditReport audit = bandwidth_audit(stats, config);

  std::ostringstream trajectory, audit_body;
  trajectory_csv(trajectory, stats, manifest);
  audit_csv(audit_body, audit, manifest);
  if (!opts.out_dir.empty()) {
    write_file(opts.out_dir, "trajectory.csv", trajectory.str());
    write_file(opts.out_dir, "audit.csv", audit_body.str());
  }

  std::cout << "steps=" << stats.steps << " burn_in=" << stats.burn_in
            << " avg_cut=" << to_fraction_string(stats.running_avg_cut) << " ("
            << to_decimal_string(stats.running_avg_cut) << ")"
            << " stderr=" << stats.stderr_avg << " audit=" << (audit.pass ? "pass" : "FAIL");
  if (stats.time_avg_cut) std::cout << " time_avg=" << *stats.time_avg_cut;
  std::cout << '\n';
  for (const auto& warning : stats.warnings) std::cerr << "warning: " << warning << '\n';
  return audit.pass ? 0 : kExitCheckFailed;
}

int cmd_mixing(const CommonOpts& opts, std::vector<int> ns, std::vector<int> cs) {
  if (ns.empty()) ns = {3, 4, 5};
  if (cs.empty()) cs = {0, 1, 2, 3};
  std::vector<MixingCheck> checks;
  bool all_certified = true;
  for (int n : ns) {
    for (int c : cs) {
      checks.push_back(mixing_check(n, c));
      all_certified = all_certified && checks.back().certified;
    }
  }
  RunManifest manifest;
  manifest.config_source = "-";
  manifest.subcommand = "mixing";
  manifest.flags = "";
  manifest.seed = opts.seed;
  manifest.timestamp = current_timestamp_utc();

  std::ostringstream csv;
  mixing_csv(csv, checks, manifest);
  std::cout << csv.str();
  if (!opts.out_dir.empty()) write_file(opts.out_dir, "mixing.csv", csv.str());
  return all_certified ? 0 : kExitCheckFailed;
}

int cmd_stationary(const CommonOpts& opts) {
  const NetworkConfig config = resolve_config(opts);
  std::vector<std::string> warnings;
  const BlockDistribution blocks = stationary_blocks(config, &warnings);
  const Rational residual = verify_stationary(blocks, config);
  const RunManifest manifest = make_manifest(opts, "stationary", "");

  std::ostringstream csv;
  blocks_csv(csv, blocks, manifest);
  csv << "# stationarity_residual=" << to_fraction_string(residual) << '\n';
  std::cout << csv.str();
  for (const auto& warning : warnings) std::cerr << "warning: " << warning << '\n';
  if (!opts.out_dir.empty()) write_file(opts.out_dir, "stationary.csv", csv.str());
  return residual == 0 ? 0 : kExitCheckFailed;
}

int cmd_oracle_check(const CommonOpts& opts, int max_n, bool has_config, bool dump_graph) {
  if (max_n < 3 || max_n > 6) throw std::invalid_argument("--max-n must be between 3 and 6");
  OracleSweepResult result;

  if (has_config) {
    const NetworkConfig config = resolve_config(opts);
    if (dump_graph) {
      // Edge list of the identity covering sequence with the collector on
      // the first k' nodes.
      std::vector<NodeId> failures, selection;
      for (NodeId v = 1; v <= config.n(); ++v) failures.push_back(v);
      for (NodeId v = 1; v <= config.k_prime; ++v) selection.push_back(v);
      FlowGraph::build(config, WeightRule::star(), failures)
          .with_collector(selection)
          .dump(std::cout);
    }
    if (config.n() > max_n) {
      throw std::invalid_argument("config too large for an exhaustive oracle check");
    }
    result += oracle_check_config(config, WeightRule::star());
    if (config.n1 >= 2 && config.beta1 > config.beta2) {
      result += oracle_check_config(config, WeightRule::fixed_cost(epsilon1_max(config)));
    }
    result += oracle_check_alpha(config);
  } else {
    result = oracle_equivalence_sweep(max_n);
  }

  std::cout << result.mismatches << " mismatches / " << result.comparisons << " comparisons\n";
  return result.clean() ? 0 : kExitCheckFailed;
}

int cmd_report(const CommonOpts& opts, const std::string& eps1_text) {
  const NetworkConfig config = resolve_config(opts);
  std::optional<Rational> eps1;
  if (!eps1_text.empty()) eps1 = parse_rational(eps1_text);
  else if (!opts.preset.empty()) eps1 = preset_default_tilt(opts.preset);

  const BoundsReport bounds = bounds_report(config, eps1);
  const auto checks = opts.preset.empty() ? std::vector<ReferenceCheck>{}
                                          : reference_checks(opts.preset, bounds);
  const RunManifest manifest = make_manifest(opts, "report", "epsilon1=" + eps1_text);

  std::ostringstream extra;
  extra << "{\n  \"average_min_cut\": ";
  const Rational avg = average_min_cut_exact(config, WeightRule::star());
  extra << '"' << to_fraction_string(avg) << '"';
  extra << ",\n  \"in_sandwich\": "
        << ((bounds.average_lb.closed_form <= avg && avg <= bounds.average_ub) ? "true" : "false");
  if (config.n1 == 1 && std::holds_alternative<TwoClassFailure>(config.failure_model)) {
    const BlockDistribution blocks = stationary_blocks(config);
    extra << ",\n  \"stationary_residual\": \""
          << to_fraction_string(verify_stationary(blocks, config)) << '"';
  }
  extra << "\n}";

  // Splice the extras into the bounds report document.
  std::string body = bounds_report_json(bounds, config, manifest, checks);
  body.insert(body.rfind('\n'), ",\n  \"analysis\": " + extra.str());

  std::cout << body << '\n';
  if (!opts.out_dir.empty()) write_file(opts.out_dir, "report.json", body + "\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamical two-class storage network calculator"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string eps1_text, hetero_eps1_text, target_text, lambda_text;
  std::string rule_name = "star", mode_name = "min";
  long steps = 100000, burn_in_flag = -1;
  int replicas = 1, max_n = 6;
  bool continuous = false;
  std::vector<int> mixing_ns, mixing_cs;

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "evaluate every capacity bound");
  add_common(bounds_cmd, opts);
  bounds_cmd->add_option("--epsilon1", eps1_text, "protocol tilt, e.g. 1/20");
  bounds_cmd->add_option("--hetero-epsilon1", hetero_eps1_text, "two-class protocol tilt");

  CLI::App* static_cmd = app.add_subcommand("static-cut", "worst-case cut constants");
  add_common(static_cmd, opts);
  static_cmd->add_option("--epsilon1", eps1_text, "protocol tilt");

  CLI::App* avg_cmd = app.add_subcommand("avg-cut", "exact average min cut via position classes");
  add_common(avg_cmd, opts);
  avg_cmd->add_option("--rule", rule_name, "star or eps")->check(CLI::IsMember({"star", "eps"}));
  avg_cmd->add_option("--epsilon1", eps1_text, "protocol tilt");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo trajectory with audit");
  add_common(sim_cmd, opts);
  sim_cmd->add_option("--rule", rule_name, "star, eps, hetero or adaptive")
      ->check(CLI::IsMember({"star", "eps", "hetero", "adaptive"}));
  sim_cmd->add_option("--epsilon1,--epsilon", eps1_text, "protocol tilt");
  sim_cmd->add_option("--target", target_text, "adaptive pinned cut (default: exact average)");
  sim_cmd->add_option("--steps", steps, "failure events to simulate");
  sim_cmd->add_option("--replicas", replicas, "independent replicas (mean/stderr mode)");
  sim_cmd->add_option("--mode", mode_name, "min or max")->check(CLI::IsMember({"min", "max"}));
  sim_cmd->add_option("--burn-in", burn_in_flag, "burn-in steps (default: ceil(n ln n + 3n))");
  sim_cmd->add_flag("--continuous", continuous, "exponential holding times (needs lambda)");
  sim_cmd->add_option("--lambda", lambda_text, "override the config failure rate");

  CLI::App* mixing_cmd = app.add_subcommand("mixing", "exact mixing certificates");
  add_common(mixing_cmd, opts);
  mixing_cmd->add_option("--n", mixing_ns, "chain sizes (default 3 4 5)");
  mixing_cmd->add_option("--c", mixing_cs, "confidence offsets (default 0 1 2 3)");

  CLI::App* stationary_cmd = app.add_subcommand("stationary", "block stationary distribution");
  add_common(stationary_cmd, opts);

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-check", "closed forms vs the flow-graph max-flow oracle");
  add_common(oracle_cmd, opts);
  oracle_cmd->add_option("--max-n", max_n, "largest network size to sweep (<= 6)");
  bool dump_graph = false;
  oracle_cmd->add_flag("--dump", dump_graph, "print the identity covering-graph edge list");

  CLI::App* report_cmd = app.add_subcommand("report", "one-shot JSON report");
  add_common(report_cmd, opts);
  report_cmd->add_option("--epsilon1", eps1_text, "protocol tilt");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(opts, eps1_text, hetero_eps1_text);
    if (static_cmd->parsed()) return cmd_static_cut(opts, eps1_text);
    if (avg_cmd->parsed()) return cmd_avg_cut(opts, rule_name, eps1_text);
    if (sim_cmd->parsed()) {
      return cmd_simulate(opts, rule_name, eps1_text, target_text, steps, replicas, mode_name,
                          burn_in_flag, continuous, lambda_text);
    }
    if (mixing_cmd->parsed()) return cmd_mixing(opts, mixing_ns, mixing_cs);
    if (stationary_cmd->parsed()) return cmd_stationary(opts);
    if (oracle_cmd->parsed()) {
      return cmd_oracle_check(opts, max_n, !opts.config_path.empty() || !opts.preset.empty(),
                              dump_graph);
    }
    if (report_cmd->parsed()) return cmd_report(opts, eps1_text);
  } catch (const WorkLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
