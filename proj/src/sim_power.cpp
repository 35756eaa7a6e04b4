#include "r2o/sim_power.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace r2o::power {

namespace {

constexpr double kEnergyEps = 1e-9;  // MWh

double group_demand(const std::vector<FeederLoad>& loads, int t, bool protected_group) {
  double total = 0.0;
  for (const auto& f : loads) {
    if (f.is_protected == protected_group) total += f.demand_mwh[t];
  }
  return total;
}

ProtectedService service_from_string(const std::string& s) {
  if (s == "none" || s.empty()) return ProtectedService::None;
  if (s == "clinic") return ProtectedService::Clinic;
  if (s == "elevator") return ProtectedService::Elevator;
  throw ScenarioError("unknown protected service: " + s);
}

}  // namespace

void PowerScenario::validate() const {
  if (feeders.empty()) throw ScenarioError("scenario has no feeders");
  if (static_cast<int>(capacity_mwh.size()) != kSteps) {
    throw ScenarioError("capacity series must have 96 steps");
  }
  for (const auto& f : feeders) {
    if (static_cast<int>(f.demand_mwh.size()) != kSteps) {
      throw ScenarioError("feeder " + f.feeder_id + " must have 96 demand steps");
    }
    for (double d : f.demand_mwh) {
      if (d < 0.0 || !std::isfinite(d)) {
        throw ScenarioError("feeder " + f.feeder_id + " has a negative demand value");
      }
    }
    if (f.min_service_fraction < 0.0 || f.min_service_fraction > 1.0) {
      throw ScenarioError("feeder " + f.feeder_id + " min_service_fraction outside [0,1]");
    }
  }
  if (protected_weight <= 0.0 || general_weight <= 0.0) {
    throw ScenarioError("curtailment weights must be positive");
  }
}

PowerScenario load_power_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario: " + path);
  YAML::Node root = YAML::Load(in);

  PowerScenario s;
  s.scenario_id = root["scenario_id"].as<std::string>("power_case");
  s.seed = root["seed"].as<std::uint64_t>(0);
  if (root["weights"]) {
    s.protected_weight = root["weights"]["protected"].as<double>(0.5);
    s.general_weight = root["weights"]["general"].as<double>(1.0);
  }
  for (const auto& node : root["feeders"]) {
    FeederLoad f;
    f.feeder_id = node["id"].as<std::string>();
    f.is_protected = node["group"].as<std::string>() == "protected";
    f.service = service_from_string(node["service"].as<std::string>("none"));
    f.min_service_fraction = node["min_service_fraction"].as<double>(0.0);
    f.demand_mwh = node["demand_mwh"].as<std::vector<double>>();
    s.feeders.push_back(std::move(f));
  }
  s.capacity_mwh = root["capacity_mwh"].as<std::vector<double>>();
  s.validate();
  return s;
}

double CurtailmentPlan::step_total(int t) const {
  double total = 0.0;
  for (const auto& feeder : curtailed_mwh) total += feeder[t];
  return total;
}

double CurtailmentPlan::total() const {
  double total = 0.0;
  for (const auto& feeder : curtailed_mwh) {
    total = std::accumulate(feeder.begin(), feeder.end(), total);
  }
  return total;
}

CurtailmentPlan baseline_dispatch(const std::vector<FeederLoad>& loads,
                                  const std::vector<double>& capacity_mwh,
                                  double protected_weight, double general_weight) {
  const int n = static_cast<int>(loads.size());
  CurtailmentPlan plan;
  plan.curtailed_mwh.assign(n, std::vector<double>(kSteps, 0.0));

  // Merit order: ascending weight, declaration order breaks ties.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double wa = loads[a].is_protected ? protected_weight : general_weight;
    const double wb = loads[b].is_protected ? protected_weight : general_weight;
    return wa < wb;
  });

  for (int t = 0; t < kSteps; ++t) {
    double demand = 0.0;
    for (const auto& f : loads) demand += f.demand_mwh[t];
    double remaining = demand - capacity_mwh[t];
    if (remaining <= 0.0) continue;

    for (int idx : order) {
      if (remaining <= 0.0) break;
      const FeederLoad& f = loads[idx];
      const double headroom = f.demand_mwh[t] * (1.0 - f.min_service_fraction);
      const double cut = std::min(headroom, remaining);
      plan.curtailed_mwh[idx][t] = cut;
      remaining -= cut;
    }
    if (remaining > kEnergyEps) {
      std::ostringstream msg;
      msg << "shortfall unservable at step " << t << ": " << remaining
          << " MWh above minimum-service load";
      throw InfeasibleError(msg.str());
    }
  }
  return plan;
}

CurtailmentPlan equity_rotation_fallback(const std::vector<FeederLoad>& loads,
                                         const std::vector<double>& capacity_mwh, double tau_d,
                                         const std::set<std::string>& reserved_feeders) {
  const int n = static_cast<int>(loads.size());
  CurtailmentPlan plan;
  plan.curtailed_mwh.assign(n, std::vector<double>(kSteps, 0.0));

  std::vector<int> rotation;  // non-reserved feeders, declaration order
  std::vector<int> reserved;
  for (int i = 0; i < n; ++i) {
    if (reserved_feeders.count(loads[i].feeder_id)) {
      reserved.push_back(i);
    } else {
      rotation.push_back(i);
    }
  }

  for (int t = 0; t < kSteps; ++t) {
    double demand = 0.0;
    for (const auto& f : loads) demand += f.demand_mwh[t];
    const double needed = demand - capacity_mwh[t];
    if (needed <= 0.0) continue;

    const double base_p = group_demand(loads, t, true);
    const double base_g = group_demand(loads, t, false);

    // Per-step equity cap on the protected group's share, from the
    // constraint h_p / b_p <= tau_d * h_g / b_g with h_p + h_g = needed.
    // Degenerates to "no cap" when either group is absent.
    double protected_cap = needed;
    if (base_p > 0.0 && base_g > 0.0) {
      const double r = base_p / base_g;
      protected_cap = tau_d * r * needed / (1.0 + tau_d * r);
    }

    double remaining = needed;
    double protected_cut = 0.0;
    auto allocate = [&](int idx, bool apply_cap) {
      if (remaining <= 0.0) return;
      const FeederLoad& f = loads[idx];
      double headroom = f.demand_mwh[t] * (1.0 - f.min_service_fraction) -
                        plan.curtailed_mwh[idx][t];
      if (apply_cap && f.is_protected) {
        headroom = std::min(headroom, protected_cap - protected_cut);
      }
      if (headroom <= 0.0) return;
      const double cut = std::min(headroom, remaining);
      plan.curtailed_mwh[idx][t] += cut;
      remaining -= cut;
      if (f.is_protected) protected_cut += cut;
    };

    if (!rotation.empty()) {
      const int start = t % static_cast<int>(rotation.size());
      for (size_t k = 0; k < rotation.size(); ++k) {
        allocate(rotation[(start + k) % rotation.size()], true);
      }
      if (remaining > kEnergyEps) {
        // Equity cap infeasible with the general headroom available: relax
        // toward a proportional split and note it for the audit trail.
        plan.equity_cap_relaxed = true;
        for (size_t k = 0; k < rotation.size(); ++k) {
          allocate(rotation[(start + k) % rotation.size()], false);
        }
      }
    }
    if (remaining > kEnergyEps) {
      plan.equity_cap_relaxed = true;
      for (int idx : reserved) allocate(idx, false);
    }
    if (remaining > kEnergyEps) {
      std::ostringstream msg;
      msg << "equity rotation infeasible at step " << t << ": " << remaining
          << " MWh above minimum-service load";
      throw InfeasibleError(msg.str());
    }
  }
  return plan;
}

CurtailmentPlan n1_deterministic_plan(const std::vector<FeederLoad>& loads,
                                      const std::vector<double>& capacity_mwh) {
  const int n = static_cast<int>(loads.size());
  CurtailmentPlan plan;
  plan.curtailed_mwh.assign(n, std::vector<double>(kSteps, 0.0));

  for (int t = 0; t < kSteps; ++t) {
    double demand = 0.0;
    for (const auto& f : loads) demand += f.demand_mwh[t];
    double needed = demand - capacity_mwh[t];
    if (needed <= 0.0) continue;

    // Proportional over non-exempt headroom; exempt feeders only as a last
    // resort (still above their floors).
    for (int pass = 0; pass < 2 && needed > kEnergyEps; ++pass) {
      double pool = 0.0;
      for (int i = 0; i < n; ++i) {
        const bool exempt = loads[i].service != ProtectedService::None;
        if ((pass == 0) == exempt) continue;
        pool += loads[i].demand_mwh[t] * (1.0 - loads[i].min_service_fraction) -
                plan.curtailed_mwh[i][t];
      }
      if (pool <= 0.0) continue;
      const double share = std::min(1.0, needed / pool);
      double allocated = 0.0;
      for (int i = 0; i < n; ++i) {
        const bool exempt = loads[i].service != ProtectedService::None;
        if ((pass == 0) == exempt) continue;
        const double headroom = loads[i].demand_mwh[t] * (1.0 - loads[i].min_service_fraction) -
                                plan.curtailed_mwh[i][t];
        const double cut = headroom * share;
        plan.curtailed_mwh[i][t] += cut;
        allocated += cut;
      }
      needed -= allocated;
    }
    if (needed > kEnergyEps) {
      throw InfeasibleError("deterministic dispatch infeasible at step " + std::to_string(t));
    }
  }
  return plan;
}

PowerReport summarize_plan(const std::vector<FeederLoad>& loads, const CurtailmentPlan& plan) {
  PowerReport report;
  double base_p = 0.0, base_g = 0.0;
  for (size_t i = 0; i < loads.size(); ++i) {
    const FeederLoad& f = loads[i];
    for (int t = 0; t < kSteps; ++t) {
      const double cut = plan.curtailed_mwh[i][t];
      report.ens_total_mwh += cut;
      if (f.is_protected) {
        report.ens_protected_mwh += cut;
      } else {
        report.ens_general_mwh += cut;
      }
      const double served = f.demand_mwh[t] - cut;
      if (served < f.min_service_fraction * f.demand_mwh[t] - kEnergyEps) {
        ++report.protected_min_violations;
      }
      if (f.is_protected) {
        base_p += f.demand_mwh[t];
      } else {
        base_g += f.demand_mwh[t];
      }
    }
  }
  if (base_p > 0.0 && base_g > 0.0) {
    GroupOutcome p{"protected", true, report.ens_protected_mwh, base_p};
    GroupOutcome g{"general", false, report.ens_general_mwh, base_g};
    report.disparity = disparity_ratio(p, g);
  }
  return report;
}

std::vector<std::pair<GroupOutcome, GroupOutcome>> plan_outcomes(
    const std::vector<FeederLoad>& loads, const CurtailmentPlan& plan) {
  std::vector<std::pair<GroupOutcome, GroupOutcome>> out;
  out.reserve(kSteps);
  for (int t = 0; t < kSteps; ++t) {
    GroupOutcome p{"protected", true, 0.0, 0.0};
    GroupOutcome g{"general", false, 0.0, 0.0};
    for (size_t i = 0; i < loads.size(); ++i) {
      GroupOutcome& target = loads[i].is_protected ? p : g;
      target.harm += plan.curtailed_mwh[i][t];
      target.baseline += loads[i].demand_mwh[t];
    }
    out.emplace_back(std::move(p), std::move(g));
  }
  return out;
}

namespace {

// Step disparity of a candidate plan column, using the zero-harm and
// absent-group conventions.
double step_disparity(const std::vector<FeederLoad>& loads, const CurtailmentPlan& plan, int t) {
  GroupOutcome p{"protected", true, 0.0, 0.0};
  GroupOutcome g{"general", false, 0.0, 0.0};
  for (size_t i = 0; i < loads.size(); ++i) {
    GroupOutcome& target = loads[i].is_protected ? p : g;
    target.harm += plan.curtailed_mwh[i][t];
    target.baseline += loads[i].demand_mwh[t];
  }
  if (p.baseline <= 0.0 || g.baseline <= 0.0) return 1.0;  // degenerate grouping
  return disparity_ratio(p, g);
}

// Share of protected-service feeders pushed below minimum service by the
// candidate column, expressed per hour of step time. The dispatch heuristics
// respect the floors, so a nonzero value flags a genuinely unsafe plan.
double hazard_proxy(const std::vector<FeederLoad>& loads, const CurtailmentPlan& plan, int t) {
  int service_feeders = 0;
  int below = 0;
  for (size_t i = 0; i < loads.size(); ++i) {
    if (loads[i].service == ProtectedService::None) continue;
    ++service_feeders;
    const double served = loads[i].demand_mwh[t] - plan.curtailed_mwh[i][t];
    if (served < loads[i].min_service_fraction * loads[i].demand_mwh[t] - kEnergyEps) ++below;
  }
  if (service_feeders == 0) return 0.0;
  return (static_cast<double>(below) / service_feeders) / kStepHours;
}

}  // namespace

PowerCaseResult run_power_case(const PowerScenario& scenario, const GovernanceConfig& config,
                               RunMode mode) {
  scenario.validate();
  const auto violations = validate_cross_references(config, Domain::Power);
  if (!violations.empty()) {
    throw ValidationError("config fails cross-validation: " + violations.front().path + " (" +
                          violations.front().message + ")");
  }

  PowerCaseResult result;
  result.baseline_plan = baseline_dispatch(scenario.feeders, scenario.capacity_mwh,
                                           scenario.protected_weight, scenario.general_weight);
  result.baseline = summarize_plan(scenario.feeders, result.baseline_plan);

  std::set<std::string> reserved;
  for (const auto& f : scenario.feeders) {
    if (f.service != ProtectedService::None) reserved.insert(f.feeder_id);
  }
  std::map<std::string, CurtailmentPlan> fallback_plans;
  fallback_plans["equity_rotations"] = equity_rotation_fallback(
      scenario.feeders, scenario.capacity_mwh, config.thresholds.disparity_cap, reserved);
  fallback_plans["n-1_deterministic"] =
      n1_deterministic_plan(scenario.feeders, scenario.capacity_mwh);

  result.trace.scenario_id = scenario.scenario_id;
  result.trace.mode = mode;

  OverrideGate gate(config, Domain::Power, mode, scenario.scenario_id,
                    {"merit_order_dispatch", "v1"}, &result.audit);

  CurtailmentPlan applied;
  applied.curtailed_mwh.assign(scenario.feeders.size(), std::vector<double>(kSteps, 0.0));

  for (int t = 0; t < kSteps; ++t) {
    const SimTime now = static_cast<SimTime>(t) * 900;

    MonitorVector m;
    m.step = t;
    m.disparity = step_disparity(scenario.feeders, result.baseline_plan, t);
    m.hazard_per_hr = hazard_proxy(scenario.feeders, result.baseline_plan, t);

    const GateDecision decision = gate.step(m, now);

    const CurtailmentPlan* source = &result.baseline_plan;
    if (decision.action_source == ActionSource::Fallback) {
      auto it = fallback_plans.find(decision.fallback_name);
      if (it == fallback_plans.end()) {
        throw ValidationError("no pre-validated plan for fallback " + decision.fallback_name);
      }
      source = &it->second;
    }
    for (size_t i = 0; i < scenario.feeders.size(); ++i) {
      applied.curtailed_mwh[i][t] = source->curtailed_mwh[i][t];
    }
    if (source != &result.baseline_plan) {
      applied.equity_cap_relaxed |= source->equity_cap_relaxed;
    }

    StepTrace row;
    row.t = now;
    row.source = decision.action_source;
    row.would_be_fallback =
        mode == RunMode::Shadow && decision.override_state.active;
    if (decision.override_state.active) {
      row.level = to_string(decision.override_state.level);
      row.fallback = decision.override_state.fallback_name;
    }
    row.audit_id = decision.audit_id;
    result.trace.steps.push_back(std::move(row));
    result.trace.monitors.push_back(std::move(m));
  }

  gate.finalize(static_cast<SimTime>(kSteps) * 900);
  result.applied_plan = std::move(applied);
  result.gated = summarize_plan(scenario.feeders, result.applied_plan);
  return result;
}

}  // namespace r2o::power
