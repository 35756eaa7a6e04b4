#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "r2o/config.hpp"
#include "r2o/gating.hpp"
#include "r2o/monitors.hpp"

namespace r2o::power {

// 24 hours at 15-minute resolution.
constexpr int kSteps = 96;
constexpr double kStepHours = 0.25;

enum class ProtectedService { None, Clinic, Elevator };

struct FeederLoad {
  std::string feeder_id;
  bool is_protected = false;  // distributional group label
  ProtectedService service = ProtectedService::None;
  double min_service_fraction = 0.0;   // share of demand that must stay served
  std::vector<double> demand_mwh;      // kSteps entries
};

struct PowerScenario {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::vector<FeederLoad> feeders;
  std::vector<double> capacity_mwh;    // kSteps entries
  double protected_weight = 0.5;       // merit-order cost weight per group
  double general_weight = 1.0;

  void validate() const;  // throws ScenarioError
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PowerScenario load_power_scenario(const std::string& path);

// plan[feeder][step] in MWh curtailed.
struct CurtailmentPlan {
  std::vector<std::vector<double>> curtailed_mwh;
  bool equity_cap_relaxed = false;  // proportional relaxation was needed

  double step_total(int t) const;
  double total() const;
};

struct PowerReport {
  double ens_total_mwh = 0.0;
  double ens_protected_mwh = 0.0;
  double ens_general_mwh = 0.0;
  std::optional<double> disparity;  // empty when a group has no demand
  int protected_min_violations = 0;
};

// Cost-weighted greedy merit order: per step, the cheapest-weighted feeders
// are curtailed first (down to their minimum-service floor) until the served
// total fits the available capacity.
CurtailmentPlan baseline_dispatch(const std::vector<FeederLoad>& loads,
                                  const std::vector<double>& capacity_mwh,
                                  double protected_weight, double general_weight);

// Rotational curtailment with an equity cap: reserved feeders keep at least
// their minimum service, the per-step curtailment total matches the baseline
// total, and the protected group's normalized harm never exceeds
// tau_d times the general group's. Rotation starts at (step mod feeders).
CurtailmentPlan equity_rotation_fallback(const std::vector<FeederLoad>& loads,
                                         const std::vector<double>& capacity_mwh, double tau_d,
                                         const std::set<std::string>& reserved_feeders);

// Deterministic dispatch with protected-service exemptions: curtailment is
// spread proportionally over non-exempt feeders. Serves as the L1 fallback.
CurtailmentPlan n1_deterministic_plan(const std::vector<FeederLoad>& loads,
                                      const std::vector<double>& capacity_mwh);

PowerReport summarize_plan(const std::vector<FeederLoad>& loads, const CurtailmentPlan& plan);

// Per-step (protected, general) group outcomes of a plan, for disparity math.
std::vector<std::pair<GroupOutcome, GroupOutcome>> plan_outcomes(
    const std::vector<FeederLoad>& loads, const CurtailmentPlan& plan);

struct PowerCaseResult {
  PowerReport baseline;
  PowerReport gated;  // of the applied plan (equals baseline in shadow mode)
  CurtailmentPlan baseline_plan;
  CurtailmentPlan applied_plan;
  GatedTrace trace;
  AuditLog audit;
};

// Runs the ungated baseline and the gated variant on one scenario. The gate
// sees the candidate action's predicted step disparity and hazard proxy, per
// the conservative monitor-timing convention.
PowerCaseResult run_power_case(const PowerScenario& scenario, const GovernanceConfig& config,
                               RunMode mode);

}  // namespace r2o::power
