#include "r2o/artifacts.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "r2o/sim_building.hpp"
#include "r2o/sim_power.hpp"
#include "r2o/sim_traffic.hpp"

namespace r2o::artifacts {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(GateDecisionKind kind) {
  switch (kind) {
    case GateDecisionKind::Approved: return "approved";
    case GateDecisionKind::ApprovedWithConditions: return "approved_with_conditions";
    case GateDecisionKind::Rejected: return "rejected";
  }
  return "rejected";
}

std::string WorksheetRecord::to_json() const {
  json j;
  j["system_scope"] = system_scope;
  j["operator"] = operator_name;
  j["vendor"] = vendor;
  j["control_horizons"] = control_horizons;
  j["protected_services"] = protected_services;
  j["selected_monitors"] = selected_monitors;
  j["thresholds"] = threshold_justifications;
  j["fallback_validation_summary"] = fallback_validation_summary;
  j["shadow_mode_summary"] = shadow_mode_summary;
  j["roster"] = roster;
  j["agreements"] = agreements;
  j["dissent"] = dissent;
  j["decision"] = to_string(decision);
  j["conditions"] = conditions;
  return j.dump(2) + "\n";
}

std::vector<std::string> WorksheetRecord::missing_thresholds(
    const GovernanceConfig& config) const {
  std::vector<std::string> required = {"disparity", "safety_risk_per_hr",
                                       "accessibility_downtime_minutes", "quality_sla_default"};
  for (const auto& [svc, _] : config.thresholds.quality_floor) {
    required.push_back("quality_sla." + svc);
  }
  std::vector<std::string> missing;
  for (const auto& name : required) {
    if (!threshold_justifications.count(name)) missing.push_back(name);
  }
  return missing;
}

std::string IncidentReport::to_json() const {
  json j;
  j["audit_id"] = audit_id;
  j["scenario_id"] = scenario_id;
  json trig = json::array();
  for (const auto& v : trigger) {
    json t;
    t["monitor"] = r2o::to_string(v.kind);
    t["observed"] = v.observed;
    t["bound"] = v.bound;
    if (!v.group_or_service.empty()) t["group_or_service"] = v.group_or_service;
    trig.push_back(t);
  }
  j["trigger"] = trig;
  j["immediate_action"]["level"] = r2o::to_string(level);
  j["immediate_action"]["fallback"] = fallback_name;
  j["immediate_action"]["started_at"] = format_sim_time(started_at);
  j["immediate_action"]["ended_at"] = format_sim_time(ended_at);
  j["immediate_action"]["duration_s"] = duration();
  j["affected_groups"] = affected_groups;
  j["affected_metrics"] = affected_metrics;
  j["root_causes"]["technical"] = root_cause_technical;
  j["root_causes"]["organizational"] = root_cause_organizational;
  j["root_causes"]["data_pipeline"] = root_cause_data_pipeline;
  j["mitigations"] = mitigations;
  j["public_notice"]["date"] = notice_date;
  j["public_notice"]["languages"] = notice_languages;
  j["public_notice"]["contact"] = notice_contact;
  j["closure_status"] = closure_status;
  j["invariant_violations"] = invariant_violations;
  return j.dump(2) + "\n";
}

IncidentReport generate_incident_report(const AuditRecord& opening, const AuditLog& log,
                                        const RunSummary& summary,
                                        const GovernanceConfig& config) {
  if (opening.event != "override_started" && opening.event != "override_escalated") {
    throw NotReportableError("record " + opening.id + " does not open an override");
  }
  // The override must have closed: look for the first expiry at or after the
  // opening, in the same scenario.
  std::optional<SimTime> closed_at;
  for (const auto& rec : log.records()) {
    if (rec.scenario_id != opening.scenario_id) continue;
    if ((rec.event == "override_expired" || rec.event == "override_lifted") &&
        rec.timestamp >= opening.timestamp) {
      closed_at = rec.timestamp;
      break;
    }
  }
  if (!closed_at.has_value()) {
    throw NotReportableError("override " + opening.id + " is still open; not yet reportable");
  }

  IncidentReport report;
  report.audit_id = opening.id;
  report.scenario_id = opening.scenario_id;
  report.trigger = opening.trigger;
  report.level = opening.level;
  report.fallback_name = opening.fallback_name;
  report.started_at = opening.timestamp;
  report.ended_at = *closed_at;
  report.affected_groups = summary.affected_groups;
  report.affected_metrics = summary.metrics;
  report.root_cause_technical = "[fill in: technical root cause]";
  report.root_cause_organizational = "[fill in: organizational root cause]";
  report.root_cause_data_pipeline = "[fill in: data-pipeline root cause]";
  report.mitigations = "[fill in: mitigations]";
  report.notice_date = format_sim_time(opening.timestamp);
  report.notice_languages = {"en"};
  report.notice_contact = "[fill in: contact]";
  report.closure_status = "closed";

  const auto& spec = config.levels.at(opening.level);
  if (report.duration() > spec.max_duration.count()) {
    std::ostringstream msg;
    msg << "duration " << report.duration() << " s exceeds " << r2o::to_string(opening.level)
        << " time-bound of " << spec.max_duration.count() << " s";
    report.invariant_violations.push_back(msg.str());
  }
  return report;
}

bool ReviewGateResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ReviewGateResult::render() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
  }
  out << (pass() ? "review gate: PASS" : "review gate: FAIL") << "\n";
  return out.str();
}

namespace {

bool file_with_stem_exists(const fs::path& dir, const std::string& stem) {
  if (!fs::is_directory(dir)) return false;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().stem() == stem) return true;
  }
  return false;
}

}  // namespace

ReviewGateResult run_review_gate(const std::string& workspace, const GovernanceConfig& config) {
  const fs::path root(workspace);
  if (!fs::is_directory(root)) {
    throw std::runtime_error("workspace not readable: " + workspace);
  }

  ReviewGateResult result;
  if (config.documentation.model_card) {
    const bool ok = file_with_stem_exists(root / "docs", "model_card");
    result.checks.push_back({"model_card", ok, ok ? "" : "docs/model_card.* missing"});
  }
  if (config.documentation.datasheet) {
    const bool ok = file_with_stem_exists(root / "docs", "datasheet");
    result.checks.push_back({"datasheet", ok, ok ? "" : "docs/datasheet.* missing"});
  }
  for (const auto& stage : config.reviews.pre_deploy) {
    const fs::path marker = root / "reviews" / (stage + ".done");
    const bool ok = fs::exists(marker);
    result.checks.push_back(
        {"pre_deploy." + stage, ok, ok ? "" : "reviews/" + stage + ".done missing"});
  }
  bool refs_ok = true;
  std::string detail;
  for (Domain d : {Domain::Power, Domain::Buildings, Domain::Transport}) {
    const auto violations = validate_cross_references(config, d);
    if (!violations.empty()) {
      refs_ok = false;
      detail = violations.front().path + ": " + violations.front().message;
      break;
    }
  }
  result.checks.push_back({"config_cross_references", refs_ok, detail});
  return result;
}

std::string SweepTable::to_csv() const {
  std::ostringstream out;
  out << parameter << "," << harm_name << "," << efficiency_name << "\n";
  out.precision(10);
  for (const auto& row : rows) {
    out << row.value << "," << row.harm_metric << "," << row.efficiency_metric << "\n";
  }
  return out.str();
}

SweepTable sensitivity_sweep(const std::string& case_name, const std::string& parameter,
                             const std::vector<double>& values, const std::string& scenario_path,
                             const GovernanceConfig& base_config) {
  if (parameter != "tau_D" && parameter != "tau_A") {
    throw ValidationError("sweep parameter must be tau_D or tau_A");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw ValidationError("sweep values must be positive");
  }

  SweepTable table;
  table.case_name = case_name;
  table.parameter = parameter;

  auto config_for = [&](double value) {
    GovernanceConfig c = base_config;
    if (parameter == "tau_D") c.thresholds.disparity_cap = value;
    else c.thresholds.access_downtime_min = value;
    return c;
  };

  if (case_name == "power") {
    table.harm_name = "gated_disparity";
    table.efficiency_name = "ens_total_mwh";
    const auto scenario = power::load_power_scenario(scenario_path);
    for (double v : values) {
      const auto run = power::run_power_case(scenario, config_for(v), RunMode::Actuated);
      table.rows.push_back({v, run.gated.disparity.value_or(1.0), run.gated.ens_total_mwh});
    }
  } else if (case_name == "building") {
    table.harm_name = "gated_discomfort_hours";
    table.efficiency_name = "gated_energy_kwh";
    const auto scenario = building::load_building_scenario(scenario_path);
    for (double v : values) {
      const auto run = building::run_building_case(scenario, config_for(v), RunMode::Actuated);
      table.rows.push_back(
          {v, static_cast<double>(run.gated.discomfort_hours), run.gated.energy_kwh});
    }
  } else if (case_name == "traffic") {
    table.harm_name = "gated_ped_wait_median_s";
    table.efficiency_name = "gated_veh_delay_mean_s";
    const auto scenario = traffic::load_traffic_scenario(scenario_path);
    for (double v : values) {
      const auto run = traffic::run_traffic_case(scenario, config_for(v), RunMode::Actuated);
      table.rows.push_back({v, run.gated.ped_wait_median_s, run.gated.veh_delay_mean_s});
    }
  } else {
    throw ValidationError("unknown case for sweep: " + case_name);
  }
  return table;
}

}  // namespace r2o::artifacts
