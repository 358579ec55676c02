#include "dynstore/io.hpp"

#include <json.hpp>

#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dynstore {

using nlohmann::json;

namespace {

Rational rational_from_json(const json& j, const std::string& key) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw std::invalid_argument("field '" + key + "' must be an integer or a \"p/q\" string");
}

json rational_to_json(const Rational& r) {
  return json{{"fraction", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}};
}

json optional_rational_to_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return rational_to_json(*r);
}

json pair_to_json(const BoundPair& pair) {
  return json{{"sum_form", rational_to_json(pair.sum_form)},
              {"closed_form", rational_to_json(pair.closed_form)}};
}

json manifest_to_json(const RunManifest& m) {
  return json{{"config", m.config_source}, {"subcommand", m.subcommand}, {"flags", m.flags},
              {"seed", m.seed},           {"version", m.version},       {"timestamp", m.timestamp}};
}

// Renders `value` with exactly as many fractional digits as `reference`.
bool matches_reference(const Rational& value, const std::string& reference) {
  const size_t dot = reference.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(reference.size() - dot - 1);
  std::string rendered = to_decimal_string(value, decimals);
  // to_decimal_string trims zeros; pad back for the comparison.
  if (decimals > 0) {
    size_t rdot = rendered.find('.');
    if (rdot == std::string::npos) {
      rendered += '.';
      rdot = rendered.size() - 1;
    }
    while (rendered.size() - rdot - 1 < static_cast<size_t>(decimals)) rendered += '0';
  }
  return rendered == reference;
}

struct ReferenceEntry {
  const char* quantity;
  const char* figure;
};

ReferenceCheck make_check(const char* quantity, const char* figure, const Rational& value) {
  ReferenceCheck check;
  check.quantity = quantity;
  check.reference = figure;
  check.computed = to_decimal_string(value);
  check.matches = matches_reference(value, figure);
  return check;
}

} // namespace

NetworkConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }

  NetworkConfig cfg;
  cfg.n1 = j.at("n1").get<int>();
  cfg.n2 = j.at("n2").get<int>();
  cfg.beta1 = rational_from_json(j.at("beta1"), "beta1");
  cfg.beta2 = rational_from_json(j.at("beta2"), "beta2");
  cfg.k_prime = j.at("k_prime").get<int>();
  if (j.contains("alpha") && !j.at("alpha").is_null()) {
    cfg.alpha = rational_from_json(j.at("alpha"), "alpha");
  }
  if (j.contains("lambda") && !j.at("lambda").is_null()) {
    cfg.lambda = rational_from_json(j.at("lambda"), "lambda");
  }
  if (j.contains("failure_model") && !j.at("failure_model").is_null()) {
    const json& fm = j.at("failure_model");
    const std::string kind = fm.at("kind").get<std::string>();
    if (kind == "uniform") {
      cfg.failure_model = UniformFailure{};
    } else if (kind == "two_class") {
      cfg.failure_model = TwoClassFailure{rational_from_json(fm.at("p"), "p"),
                                          rational_from_json(fm.at("q"), "q")};
    } else if (kind == "per_node") {
      PerNodeFailure per;
      for (const auto& entry : fm.at("per_node")) {
        per.probs.push_back(rational_from_json(entry, "per_node"));
      }
      cfg.failure_model = std::move(per);
    } else {
      throw std::invalid_argument("unknown failure_model kind '" + kind + "'");
    }
  }
  return cfg;
}

NetworkConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

std::string config_to_json(const NetworkConfig& config, int indent) {
  json j;
  j["n1"] = config.n1;
  j["n2"] = config.n2;
  j["beta1"] = to_fraction_string(config.beta1);
  j["beta2"] = to_fraction_string(config.beta2);
  j["k_prime"] = config.k_prime;
  j["alpha"] = config.alpha ? json(to_fraction_string(*config.alpha)) : json(nullptr);
  j["lambda"] = config.lambda ? json(to_fraction_string(*config.lambda)) : json(nullptr);
  if (std::holds_alternative<UniformFailure>(config.failure_model)) {
    j["failure_model"] = json{{"kind", "uniform"}};
  } else if (const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model)) {
    j["failure_model"] = json{{"kind", "two_class"},
                              {"p", to_fraction_string(tc->p)},
                              {"q", to_fraction_string(tc->q)}};
  } else {
    const auto& per = std::get<PerNodeFailure>(config.failure_model);
    json probs = json::array();
    for (const auto& p : per.probs) probs.push_back(to_fraction_string(p));
    j["failure_model"] = json{{"kind", "per_node"}, {"per_node", std::move(probs)}};
  }
  return j.dump(indent);
}

NetworkConfig preset_by_name(const std::string& name) {
  std::string key = name;
  if (key.rfind("cfg_", 0) == 0) key = key.substr(4);
  if (key == "a") return preset_cfg_a();
  if (key == "b") return preset_cfg_b();
  if (key == "c") return preset_cfg_c();
  throw std::invalid_argument("unknown preset '" + name + "' (expected a, b or c)");
}

std::string current_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string manifest_comment(const RunManifest& m) {
  std::ostringstream out;
  out << "# config=" << m.config_source << '\n'
      << "# subcommand=" << m.subcommand << '\n'
      << "# flags=" << m.flags << '\n'
      << "# seed=" << m.seed << '\n'
      << "# version=" << m.version << '\n'
      << "# timestamp=" << m.timestamp << '\n';
  return out.str();
}

std::vector<ReferenceCheck> reference_checks(const std::string& preset_name,
                                             const BoundsReport& report) {
  std::string key = preset_name;
  if (key.rfind("cfg_", 0) == 0) key = key.substr(4);

  std::vector<ReferenceCheck> checks;
  if (key == "a") {
    checks.push_back(make_check("static_cut", "214", report.static_cut));
    checks.push_back(make_check("capacity_upper_bound", "235.5", report.capacity_ub));
    if (report.memory_cut) {
      checks.push_back(make_check("memory_cut", "269", *report.memory_cut));
    }
    if (report.memory_lb && report.memory_cut) {
      checks.push_back(make_check("memory_lb_increment", "13.33",
                                  report.memory_lb->closed_form - *report.memory_cut));
    }
    checks.push_back(make_check("average_lb_increment", "3.7",
                                report.average_lb.closed_form - report.static_cut));
    checks.push_back(make_check("average_ub_increment", "9.75",
                                report.average_ub - report.static_cut));
    if (report.protocol_lb && report.protocol_eps1 &&
        *report.protocol_eps1 == Rational(1, 20)) {
      checks.push_back(make_check("protocol_lower_bound", "216.25", *report.protocol_lb));
    }
  } else if (key == "c") {
    checks.push_back(make_check("static_cut", "150", report.static_cut));
    checks.push_back(make_check("capacity_upper_bound", "177.45", report.capacity_ub));
    if (report.hetero_expected) {
      checks.push_back(make_check("expected_min_cut", "158.7", *report.hetero_expected));
    }
  }
  return checks;
}

std::string bounds_report_json(const BoundsReport& report, const NetworkConfig& config,
                               const RunManifest& manifest,
                               const std::vector<ReferenceCheck>& checks) {
  json j;
  j["manifest"] = manifest_to_json(manifest);
  j["config"] = json::parse(config_to_json(config));
  const DerivedParams derived = derived_params(config);
  j["derived"] = json{{"n", derived.n}, {"a", derived.a}, {"a_hat", derived.a_hat}};

  json b;
  b["static_cut"] = rational_to_json(report.static_cut);
  b["static_cut_alt"] = rational_to_json(report.static_cut_alt);
  b["memory_cut"] = optional_rational_to_json(report.memory_cut);
  b["capacity_upper_bound"] = rational_to_json(report.capacity_ub);
  b["epsilon1_max"] = optional_rational_to_json(report.eps1_max);
  b["protocol_epsilon1"] = optional_rational_to_json(report.protocol_eps1);
  b["protocol_lower_bound"] = optional_rational_to_json(report.protocol_lb);
  b["average_lower_bound"] = pair_to_json(report.average_lb);
  b["average_upper_bound"] = rational_to_json(report.average_ub);
  b["memory_lower_bound"] = report.memory_lb ? pair_to_json(*report.memory_lb) : json(nullptr);
  b["hetero_epsilon1"] = optional_rational_to_json(report.hetero_eps1);
  b["hetero_lower_bound"] = optional_rational_to_json(report.hetero_lb);
  b["hetero_expected_min_cut"] = optional_rational_to_json(report.hetero_expected);
  b["best_lower_bound"] = rational_to_json(report.best_lb);
  j["bounds"] = std::move(b);

  j["warnings"] = report.warnings;
  json ref = json::array();
  for (const auto& check : checks) {
    ref.push_back(json{{"quantity", check.quantity},
                       {"reference", check.reference},
                       {"computed", check.computed},
                       {"matches", check.matches}});
  }
  j["reference_checks"] = std::move(ref);
  return j.dump(2);
}

namespace {

void csv_row(std::ostream& out, const std::string& name, const Rational& value) {
  out << name << ',' << to_fraction_string(value) << ',' << to_decimal_string(value) << '\n';
}

void csv_row_opt(std::ostream& out, const std::string& name, const std::optional<Rational>& value) {
  if (value) csv_row(out, name, *value);
}

} // namespace

void bounds_report_csv(std::ostream& out, const BoundsReport& report,
                       const RunManifest& manifest, const std::vector<ReferenceCheck>& checks) {
  out << manifest_comment(manifest);
  out << "quantity,fraction,decimal\n";
  csv_row(out, "static_cut", report.static_cut);
  csv_row(out, "static_cut_alt", report.static_cut_alt);
  csv_row_opt(out, "memory_cut", report.memory_cut);
  csv_row(out, "capacity_upper_bound", report.capacity_ub);
  csv_row_opt(out, "epsilon1_max", report.eps1_max);
  csv_row_opt(out, "protocol_epsilon1", report.protocol_eps1);
  csv_row_opt(out, "protocol_lower_bound", report.protocol_lb);
  csv_row(out, "average_lower_bound_sum", report.average_lb.sum_form);
  csv_row(out, "average_lower_bound_closed", report.average_lb.closed_form);
  csv_row(out, "average_upper_bound", report.average_ub);
  if (report.memory_lb) {
    csv_row(out, "memory_lower_bound_sum", report.memory_lb->sum_form);
    csv_row(out, "memory_lower_bound_closed", report.memory_lb->closed_form);
  }
  csv_row_opt(out, "hetero_epsilon1", report.hetero_eps1);
  csv_row_opt(out, "hetero_lower_bound", report.hetero_lb);
  csv_row_opt(out, "hetero_expected_min_cut", report.hetero_expected);
  csv_row(out, "best_lower_bound", report.best_lb);
  for (const auto& warning : report.warnings) {
    out << "# warning: " << warning << '\n';
  }
  for (const auto& check : checks) {
    out << "# reference " << check.quantity << ": reference=" << check.reference
        << " computed=" << check.computed << " matches=" << (check.matches ? "yes" : "no")
        << '\n';
  }
}

void trajectory_csv(std::ostream& out, const TrajectoryStats& stats, const RunManifest& manifest) {
  out << manifest_comment(manifest);
  out << "step,failed_node,cut,running_avg,epsilon,cut_decimal,running_avg_decimal\n";
  Rational running_sum = 0;
  long counted = 0;
  for (size_t i = 0; i < stats.per_step.size(); ++i) {
    const long step = static_cast<long>(i) + 1;
    const StepRecord& record = stats.per_step[i];
    out << step << ',' << record.failed << ',' << to_fraction_string(record.cut) << ',';
    std::string avg_fraction, avg_decimal;
    if (step > stats.burn_in) {
      running_sum += record.cut;
      ++counted;
      const Rational avg = running_sum / counted;
      avg_fraction = to_fraction_string(avg);
      avg_decimal = to_decimal_string(avg);
    }
    out << avg_fraction << ',';
    if (record.epsilon) out << to_fraction_string(*record.epsilon);
    out << ',' << to_decimal_string(record.cut) << ',' << avg_decimal << '\n';
  }
}

void audit_csv(std::ostream& out, const AuditReport& audit, const RunManifest& manifest) {
  out << manifest_comment(manifest);
  out << "# ok compares total_sent/steps against beta plus 3-sigma slack\n";
  out << "node,class,events,total_sent,per_event_avg,beta,ok,per_step_avg,per_event_ok,"
         "total_sent_decimal,per_event_avg_decimal,per_step_avg_decimal\n";
  for (const auto& row : audit.rows) {
    out << row.node << ',' << (row.node_class == NodeClass::High ? "U" : "L") << ','
        << row.events << ',' << to_fraction_string(row.total_sent) << ','
        << to_fraction_string(row.per_event_avg) << ',' << to_fraction_string(row.beta) << ','
        << (row.ok ? 1 : 0) << ',' << to_fraction_string(row.per_step_avg) << ','
        << (row.ok_per_event ? 1 : 0) << ',' << to_decimal_string(row.total_sent) << ','
        << to_decimal_string(row.per_event_avg) << ',' << to_decimal_string(row.per_step_avg)
        << '\n';
  }
}

void blocks_csv(std::ostream& out, const BlockDistribution& blocks, const RunManifest& manifest) {
  out << manifest_comment(manifest);
  out << "block_index,probability,probability_decimal\n";
  for (size_t i = 0; i < blocks.block_probs.size(); ++i) {
    out << (i + 1) << ',' << to_fraction_string(blocks.block_probs[i]) << ','
        << to_decimal_string(blocks.block_probs[i], 8) << '\n';
  }
}

void mixing_csv(std::ostream& out, const std::vector<MixingCheck>& checks,
                const RunManifest& manifest) {
  out << manifest_comment(manifest);
  out << "n,c,t,tv_decimal,bound_decimal,certified\n";
  for (const auto& check : checks) {
    out << check.n << ',' << check.c << ',' << check.t << ','
        << to_decimal_string(check.tv, 8) << ',' << to_decimal_string(check.bound, 8) << ','
        << (check.certified ? 1 : 0) << '\n';
  }
}

} // namespace dynstore
