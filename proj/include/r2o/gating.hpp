#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r2o/audit.hpp"
#include "r2o/config.hpp"
#include "r2o/monitors.hpp"
#include "r2o/sim_time.hpp"

namespace r2o {

enum class RunMode { Actuated, Shadow };
enum class ActionSource { Policy, Fallback };

std::string to_string(RunMode mode);
std::string to_string(ActionSource source);
RunMode run_mode_from_string(const std::string& s);

// Identity of the control policy being gated.
struct PolicyInfo {
  std::string policy_id;
  std::string version;
};

struct OverrideState {
  bool active = false;
  OverrideLevel level = OverrideLevel::L1;
  std::string fallback_name;  // resolved catalog entry
  SimTime started_at = 0;
  SimTime expires_at = 0;
  std::vector<Violation> trigger;
  bool review_opened = false;
};

// Clears the override once its timer has elapsed; trigger evidence is kept.
OverrideState expire_overrides(OverrideState state, SimTime now);

// Ordered escalation rules; the first matching rule decides the level.
// `min_persistent_windows` counts completed L2 windows after which the same
// monitor kind re-triggered immediately.
struct EscalationRule {
  std::optional<MonitorKind> kind;  // nullopt matches any violation
  int min_persistent_windows = 0;
  OverrideLevel level = OverrideLevel::L2;
};

class EscalationMap {
 public:
  explicit EscalationMap(std::vector<EscalationRule> rules) : rules_(std::move(rules)) {}

  // hazard -> L1; anything recurring across >= l3_windows completed L2
  // windows -> L3; any other violation -> L2.
  static EscalationMap default_map(int l3_windows = 2);

  OverrideLevel determine(const std::vector<Violation>& current,
                          const std::map<MonitorKind, int>& persistence) const;

  const std::vector<EscalationRule>& rules() const { return rules_; }

 private:
  std::vector<EscalationRule> rules_;
};

// Determines the level from a history of trigger lists: one list per
// completed override window, the last list being the current violations.
OverrideLevel escalate(const std::vector<std::vector<Violation>>& trigger_history,
                       const EscalationMap& map);

struct GateDecision {
  ActionSource action_source = ActionSource::Policy;
  std::vector<Violation> violations;     // this step's threshold crossings
  OverrideState override_state;          // state after the decision
  std::string fallback_name;             // resolved, set when gated
  std::string audit_id;                  // record covering a fallback step
};

// Per-step trace row kept for reports and the audit-coverage check.
struct StepTrace {
  SimTime t = 0;
  ActionSource source = ActionSource::Policy;
  bool would_be_fallback = false;  // shadow mode: gate wanted the fallback
  std::string level;               // empty when no (would-be) override
  std::string fallback;
  std::string audit_id;
};

struct GatedTrace {
  std::string scenario_id;
  RunMode mode = RunMode::Actuated;
  std::vector<StepTrace> steps;
  std::vector<MonitorVector> monitors;
};

// The gating state machine. Each step it evaluates the monitor vector
// against thresholds, maps violations to a level, applies the pre-validated
// fallback with a timer, logs evidence, and restores normal control on
// expiry. In shadow mode the state machine runs identically but the applied
// action is always the policy's, and records are flagged.
class OverrideGate {
 public:
  OverrideGate(const GovernanceConfig& config, Domain domain, RunMode mode,
               std::string scenario_id, PolicyInfo policy, AuditLog* log);

  GateDecision step(const MonitorVector& m, SimTime now);

  // Call once at horizon end: a still-active override is recorded as lifted
  // (actuation ceases with the run), which closes it for reporting.
  void finalize(SimTime now);

  const OverrideState& state() const { return state_; }
  RunMode mode() const { return mode_; }

 private:
  AuditRecord make_record(const char* event, SimTime now, const OverrideState& st) const;
  void open_override(OverrideLevel level, const std::vector<Violation>& violations, SimTime now,
                     const char* event);

  const GovernanceConfig& config_;
  Domain domain_;
  RunMode mode_;
  std::string scenario_id_;
  PolicyInfo policy_;
  AuditLog* log_;
  EscalationMap escalation_;
  OverrideState state_;
  std::map<MonitorKind, int> persistence_;  // completed-L2-window counters
  std::optional<std::vector<Violation>> pending_window_;  // trigger of a just-expired L2
  int next_record_ = 0;
  std::string current_audit_id_;
};

}  // namespace r2o
