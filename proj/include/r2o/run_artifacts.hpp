#pragma once

#include <string>
#include <vector>

#include "r2o/artifacts.hpp"
#include "r2o/sim_building.hpp"
#include "r2o/sim_power.hpp"
#include "r2o/sim_traffic.hpp"

namespace r2o {

// Files written for one case run: result tables in aligned and delimited
// form, the monitor series, the append-only audit log, one public notice per
// override event, a step trace, and a machine-readable run summary.
struct RunArtifacts {
  std::vector<std::string> files;  // paths written, in order
  std::string primary_table;       // aligned text of the headline table
};

RunArtifacts write_power_artifacts(const power::PowerCaseResult& result,
                                   const GovernanceConfig& config, const std::string& out_dir);

RunArtifacts write_building_artifacts(const building::BuildingCaseResult& result,
                                      const GovernanceConfig& config, const std::string& out_dir);

RunArtifacts write_traffic_artifacts(const traffic::TrafficCaseResult& result,
                                     const GovernanceConfig& config, const std::string& out_dir);

// Post-run invariant checks (the exit-code-2 surface): audit coverage of
// fallback steps, override time-bounds, shadow neutrality, and the
// case-specific guarantees (held totals, the disparity cap on fallback
// windows). Returns human-readable breach descriptions; empty means sound.
std::vector<std::string> verify_power_invariants(const power::PowerScenario& scenario,
                                                 const power::PowerCaseResult& result,
                                                 const GovernanceConfig& config);

std::vector<std::string> verify_building_invariants(const building::BuildingScenario& scenario,
                                                    const building::BuildingCaseResult& result,
                                                    const GovernanceConfig& config);

std::vector<std::string> verify_traffic_invariants(const traffic::TrafficScenario& scenario,
                                                   const traffic::TrafficCaseResult& result,
                                                   const GovernanceConfig& config);

// Shared gating-contract checks over a trace and its audit log.
std::vector<std::string> verify_gating_contract(const GatedTrace& trace, const AuditLog& audit,
                                                const GovernanceConfig& config);

// The run summary consumed by incident-report generation.
std::string run_summary_json(const std::string& case_name, const GatedTrace& trace,
                             const std::vector<std::string>& affected_groups,
                             const std::map<std::string, double>& metrics);

}  // namespace r2o
