#include "r2o/gating.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace r2o {

namespace {

std::set<MonitorKind> kinds_of(const std::vector<Violation>& violations) {
  std::set<MonitorKind> kinds;
  for (const auto& v : violations) kinds.insert(v.kind);
  return kinds;
}

}  // namespace

std::string to_string(RunMode mode) {
  return mode == RunMode::Actuated ? "actuated" : "shadow";
}

std::string to_string(ActionSource source) {
  return source == ActionSource::Policy ? "policy" : "fallback";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "actuated") return RunMode::Actuated;
  if (s == "shadow") return RunMode::Shadow;
  throw ValidationError("unknown run mode: " + s);
}

OverrideState expire_overrides(OverrideState state, SimTime now) {
  if (state.active && now >= state.expires_at) {
    state.active = false;
  }
  return state;
}

EscalationMap EscalationMap::default_map(int l3_windows) {
  std::vector<EscalationRule> rules;
  rules.push_back({MonitorKind::Hazard, 0, OverrideLevel::L1});
  rules.push_back({std::nullopt, l3_windows, OverrideLevel::L3});
  rules.push_back({std::nullopt, 0, OverrideLevel::L2});
  return EscalationMap(std::move(rules));
}

OverrideLevel EscalationMap::determine(const std::vector<Violation>& current,
                                       const std::map<MonitorKind, int>& persistence) const {
  if (current.empty()) throw MonitorInputError("escalation requires a nonempty violation list");
  for (const auto& rule : rules_) {
    for (const auto& v : current) {
      if (rule.kind.has_value() && *rule.kind != v.kind) continue;
      int persisted = 0;
      auto it = persistence.find(v.kind);
      if (it != persistence.end()) persisted = it->second;
      if (persisted >= rule.min_persistent_windows) return rule.level;
    }
  }
  // Unreachable with a total rule set; the default map always has a
  // catch-all. Treat a gap as the municipal pause.
  return OverrideLevel::L2;
}

OverrideLevel escalate(const std::vector<std::vector<Violation>>& trigger_history,
                       const EscalationMap& map) {
  if (trigger_history.empty() || trigger_history.back().empty()) {
    throw MonitorInputError("escalate requires a current violation list");
  }
  const auto& current = trigger_history.back();
  std::map<MonitorKind, int> persistence;
  for (const auto& v : current) {
    int count = 0;
    for (auto it = trigger_history.rbegin() + 1; it != trigger_history.rend(); ++it) {
      const auto window_kinds = kinds_of(*it);
      if (!window_kinds.count(v.kind)) break;
      ++count;
    }
    persistence[v.kind] = count;
  }
  return map.determine(current, persistence);
}

OverrideGate::OverrideGate(const GovernanceConfig& config, Domain domain, RunMode mode,
                           std::string scenario_id, PolicyInfo policy, AuditLog* log)
    : config_(config),
      domain_(domain),
      mode_(mode),
      scenario_id_(std::move(scenario_id)),
      policy_(std::move(policy)),
      log_(log),
      escalation_(EscalationMap::default_map(config.l3_persistence_windows)) {}

AuditRecord OverrideGate::make_record(const char* event, SimTime now,
                                      const OverrideState& st) const {
  AuditRecord rec;
  char idbuf[16];
  std::snprintf(idbuf, sizeof(idbuf), "%03d", next_record_);
  rec.id = scenario_id_ + "-" + idbuf;
  rec.event = event;
  rec.shadow = mode_ == RunMode::Shadow;
  rec.timestamp = now;
  rec.scenario_id = scenario_id_;
  rec.policy_id = policy_.policy_id;
  rec.policy_version = policy_.version;
  rec.level = st.level;
  rec.authority = config_.levels.at(st.level).authority;
  rec.fallback_name = st.fallback_name;
  rec.trigger = st.trigger;
  rec.expires_at = st.expires_at;
  rec.review_opened = st.review_opened;
  return rec;
}

void OverrideGate::open_override(OverrideLevel level, const std::vector<Violation>& violations,
                                 SimTime now, const char* event) {
  const LevelSpec& spec = config_.levels.at(level);
  // Fail closed: an unresolvable fallback is a configuration error, raised
  // before any state change.
  const std::string resolved = resolve_fallback(config_, domain_, spec.fallback_name);

  state_.active = true;
  state_.level = level;
  state_.fallback_name = resolved;
  state_.started_at = now;
  state_.expires_at = now + spec.max_duration.count();
  state_.trigger = violations;
  state_.review_opened = true;

  AuditRecord rec = make_record(event, now, state_);
  current_audit_id_ = rec.id;
  ++next_record_;
  if (log_) log_->append(std::move(rec));
}

GateDecision OverrideGate::step(const MonitorVector& m, SimTime now) {
  if (state_.active && now >= state_.expires_at) {
    if (state_.level == OverrideLevel::L2) {
      pending_window_ = state_.trigger;
    } else {
      pending_window_.reset();
    }
    AuditRecord rec = make_record("override_expired", now, state_);
    ++next_record_;
    if (log_) log_->append(std::move(rec));
    state_ = expire_overrides(state_, now);
    current_audit_id_.clear();
  }

  GateDecision decision;
  decision.violations = evaluate_thresholds(m, config_.thresholds);

  // Persistence bookkeeping happens at the first evaluation after an L2
  // window completes: an immediate recurrence extends the chain, anything
  // else breaks it.
  if (pending_window_.has_value()) {
    const auto window_kinds = kinds_of(*pending_window_);
    const auto current_kinds = kinds_of(decision.violations);
    for (MonitorKind kind : window_kinds) {
      if (current_kinds.count(kind)) {
        persistence_[kind] += 1;
      } else {
        persistence_[kind] = 0;
      }
    }
    pending_window_.reset();
  }

  if (!decision.violations.empty()) {
    const OverrideLevel proposed = escalation_.determine(decision.violations, persistence_);
    if (!state_.active) {
      open_override(proposed, decision.violations, now, "override_started");
    } else if (proposed > state_.level) {
      // A more severe determination during an active window escalates in
      // place and restarts the timer at the higher level.
      open_override(proposed, decision.violations, now, "override_escalated");
    }
  }

  decision.override_state = state_;
  if (state_.active) {
    decision.fallback_name = state_.fallback_name;
    if (mode_ == RunMode::Actuated) {
      decision.action_source = ActionSource::Fallback;
      decision.audit_id = current_audit_id_;
    }
  }
  return decision;
}

void OverrideGate::finalize(SimTime now) {
  if (!state_.active) return;
  AuditRecord rec = make_record("override_expired", now, state_);
  rec.event = now < state_.expires_at ? "override_lifted" : "override_expired";
  ++next_record_;
  if (log_) log_->append(std::move(rec));
  state_.active = false;
  current_audit_id_.clear();
}

}  // namespace r2o
