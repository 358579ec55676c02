#pragma once

#include "dynstore/bounds.hpp"
#include "dynstore/chain.hpp"
#include "dynstore/config.hpp"
#include "dynstore/sim.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dynstore {

inline constexpr const char* kToolVersion = "0.1.0";

// Config files are JSON: keys n1, n2, beta1, beta2, k_prime, alpha,
// failure_model{kind,p,q,per_node}, lambda. Rationals are "p/q" strings or
// integers; alpha/lambda may be null or absent.
NetworkConfig config_from_json(const std::string& json_text);
NetworkConfig load_config_file(const std::string& path);
std::string config_to_json(const NetworkConfig& config, int indent = 2);

// Preset lookup by name ("a", "b", "c" or "cfg_a", ...). Throws on unknown
// names.
NetworkConfig preset_by_name(const std::string& name);

struct RunManifest {
  std::string config_source; // path or "preset:<name>"
  std::string subcommand;
  std::string flags;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  std::string timestamp; // ISO-8601 UTC
};

std::string current_timestamp_utc();
// "# key=value" comment lines embedded at the top of CSV outputs.
std::string manifest_comment(const RunManifest& manifest);

// Decimal figures bundled with the named presets for cross-checking report
// values; `matches` compares the computed value rendered at the reference's
// precision.
struct ReferenceCheck {
  std::string quantity;
  std::string reference;
  std::string computed;
  bool matches = false;
};
std::vector<ReferenceCheck> reference_checks(const std::string& preset_name,
                                             const BoundsReport& report);

std::string bounds_report_json(const BoundsReport& report, const NetworkConfig& config,
                               const RunManifest& manifest,
                               const std::vector<ReferenceCheck>& checks);
void bounds_report_csv(std::ostream& out, const BoundsReport& report,
                       const RunManifest& manifest, const std::vector<ReferenceCheck>& checks);

void trajectory_csv(std::ostream& out, const TrajectoryStats& stats, const RunManifest& manifest);
void audit_csv(std::ostream& out, const AuditReport& audit, const RunManifest& manifest);
void blocks_csv(std::ostream& out, const BlockDistribution& blocks, const RunManifest& manifest);
void mixing_csv(std::ostream& out, const std::vector<MixingCheck>& checks,
                const RunManifest& manifest);

} // namespace dynstore
