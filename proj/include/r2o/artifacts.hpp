#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r2o/audit.hpp"
#include "r2o/config.hpp"

namespace r2o::artifacts {

class NotReportableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GateDecisionKind { Approved, ApprovedWithConditions, Rejected };

std::string to_string(GateDecisionKind kind);

// Pre-deployment scenario walkthrough record. Free-text sections are carried
// as opaque text; validation only checks the machine-checkable parts.
struct WorksheetRecord {
  std::string system_scope;
  std::string operator_name;
  std::string vendor;
  std::string control_horizons;
  std::vector<std::string> protected_services;
  std::vector<std::string> selected_monitors;
  std::map<std::string, std::string> threshold_justifications;  // threshold name -> rationale
  std::string fallback_validation_summary;
  std::string shadow_mode_summary;
  std::string roster;
  std::string agreements;
  std::string dissent;
  GateDecisionKind decision = GateDecisionKind::Rejected;
  std::string conditions;

  std::string to_json() const;
  // Missing threshold names: every threshold present in the config must be
  // justified in the worksheet.
  std::vector<std::string> missing_thresholds(const GovernanceConfig& config) const;
};

// Post-incident review artifact, generated from the audit trail.
struct IncidentReport {
  std::string audit_id;
  std::string scenario_id;
  std::vector<Violation> trigger;
  OverrideLevel level = OverrideLevel::L1;
  std::string fallback_name;
  SimTime started_at = 0;
  SimTime ended_at = 0;
  std::vector<std::string> affected_groups;
  std::map<std::string, double> affected_metrics;
  std::string root_cause_technical;      // fill-in sections
  std::string root_cause_organizational;
  std::string root_cause_data_pipeline;
  std::string mitigations;
  std::string notice_date;
  std::vector<std::string> notice_languages;
  std::string notice_contact;
  std::string closure_status = "open";
  std::vector<std::string> invariant_violations;

  SimTime duration() const { return ended_at - started_at; }
  std::string to_json() const;
};

// Metrics context handed to report generation (the run's own summary).
struct RunSummary {
  std::vector<std::string> affected_groups;
  std::map<std::string, double> metrics;
};

// Builds the post-incident report for one opening record. The override must
// be closed: a later override_expired record has to exist in the same log,
// otherwise NotReportableError. Duration beyond the level's time-bound is
// surfaced in invariant_violations.
IncidentReport generate_incident_report(const AuditRecord& opening, const AuditLog& log,
                                        const RunSummary& summary,
                                        const GovernanceConfig& config);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ReviewGateResult {
  std::vector<CheckResult> checks;

  bool pass() const;
  std::string render() const;
};

// Documentation/review gate over a workspace directory:
//   docs/model_card.*, docs/datasheet.*, reviews/<stage>.done per configured
//   pre-deployment stage, plus config cross-reference validity for every
//   domain. Checks are derived from the config, not hard-coded.
ReviewGateResult run_review_gate(const std::string& workspace, const GovernanceConfig& config);

struct SweepRow {
  double value = 0.0;
  double harm_metric = 0.0;
  double efficiency_metric = 0.0;
};

struct SweepTable {
  std::string case_name;
  std::string parameter;
  std::string harm_name;
  std::string efficiency_name;
  std::vector<SweepRow> rows;

  std::string to_csv() const;
};

// Re-runs the gated case per threshold value and tabulates the trade-off.
// parameter is "tau_D" or "tau_A"; the scenario file is reloaded per run.
SweepTable sensitivity_sweep(const std::string& case_name, const std::string& parameter,
                             const std::vector<double>& values, const std::string& scenario_path,
                             const GovernanceConfig& base_config);

}  // namespace r2o::artifacts
