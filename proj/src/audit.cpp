#include "r2o/audit.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace r2o {

using nlohmann::json;

namespace {

json violation_to_json(const Violation& v) {
  json j;
  j["monitor"] = to_string(v.kind);
  j["observed"] = v.observed;
  j["bound"] = v.bound;
  j["direction"] = to_string(v.direction);
  if (!v.group_or_service.empty()) j["group_or_service"] = v.group_or_service;
  return j;
}

Violation violation_from_json(const json& j) {
  Violation v;
  const std::string kind = j.at("monitor").get<std::string>();
  if (kind == "disparity") v.kind = MonitorKind::Disparity;
  else if (kind == "hazard") v.kind = MonitorKind::Hazard;
  else if (kind == "accessibility") v.kind = MonitorKind::Accessibility;
  else v.kind = MonitorKind::Quality;
  v.observed = j.at("observed").get<double>();
  v.bound = j.at("bound").get<double>();
  v.direction = j.at("direction").get<std::string>() == "exceeds" ? CrossDirection::Exceeds
                                                                  : CrossDirection::FallsBelow;
  if (j.contains("group_or_service")) v.group_or_service = j["group_or_service"].get<std::string>();
  return v;
}

}  // namespace

std::string format_sim_time(SimTime t) {
  const SimTime day = t / kSecondsPerDay;
  SimTime rem = t % kSecondsPerDay;
  if (rem < 0) rem += kSecondsPerDay;
  char buf[32];
  const int h = static_cast<int>(rem / 3600);
  const int m = static_cast<int>((rem % 3600) / 60);
  const int s = static_cast<int>(rem % 60);
  if (day > 0) {
    std::snprintf(buf, sizeof(buf), "%lldd %02d:%02d:%02d", static_cast<long long>(day), h, m, s);
  } else {
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", h, m, s);
  }
  return buf;
}

std::string AuditRecord::to_json_line() const {
  json j;
  j["id"] = id;
  j["event"] = event;
  j["shadow"] = shadow;
  j["timestamp"] = format_sim_time(timestamp);
  j["timestamp_s"] = timestamp;
  j["scenario_id"] = scenario_id;
  j["policy_id"] = policy_id;
  j["policy_version"] = policy_version;
  j["level"] = to_string(level);
  j["authority"] = to_string(authority);
  j["fallback_name"] = fallback_name;
  json trig = json::array();
  for (const auto& v : trigger) trig.push_back(violation_to_json(v));
  j["trigger"] = trig;
  j["expires_at"] = format_sim_time(expires_at);
  j["expires_at_s"] = expires_at;
  j["review_opened"] = review_opened;
  return j.dump();
}

AuditRecord AuditRecord::from_json_line(const std::string& line) {
  const json j = json::parse(line);
  AuditRecord r;
  r.id = j.at("id").get<std::string>();
  r.event = j.at("event").get<std::string>();
  r.shadow = j.at("shadow").get<bool>();
  r.timestamp = j.at("timestamp_s").get<SimTime>();
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.policy_id = j.at("policy_id").get<std::string>();
  r.policy_version = j.at("policy_version").get<std::string>();
  r.level = level_from_string(j.at("level").get<std::string>());
  r.authority = authority_from_string(j.at("authority").get<std::string>());
  r.fallback_name = j.at("fallback_name").get<std::string>();
  for (const auto& v : j.at("trigger")) r.trigger.push_back(violation_from_json(v));
  r.expires_at = j.at("expires_at_s").get<SimTime>();
  r.review_opened = j.at("review_opened").get<bool>();
  return r;
}

std::string AuditLog::to_jsonl() const {
  std::ostringstream out;
  for (const auto& r : records_) out << r.to_json_line() << "\n";
  return out.str();
}

void AuditLog::write_jsonl(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write audit log: " + path);
  out << to_jsonl();
}

AuditLog AuditLog::read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read audit log: " + path);
  AuditLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) log.append(AuditRecord::from_json_line(line));
  }
  return log;
}

std::string notice_document(const AuditRecord& record, const GovernanceConfig& config) {
  json j;
  j["audit_id"] = record.id;
  j["channel"] = config.publishing.notices;
  j["headline"] = std::string(record.shadow ? "Shadow trial: " : "") + "Automated control " +
                  (record.event == "override_expired" ? "restored" : "paused") + " (" +
                  to_string(record.level) + ")";
  j["scenario"] = record.scenario_id;
  j["policy"] = record.policy_id + " " + record.policy_version;
  j["level"] = to_string(record.level);
  j["authority"] = to_string(record.authority);
  j["fallback"] = record.fallback_name;
  std::ostringstream rationale;
  for (size_t i = 0; i < record.trigger.size(); ++i) {
    const auto& v = record.trigger[i];
    if (i) rationale << "; ";
    rationale << to_string(v.kind);
    if (!v.group_or_service.empty()) rationale << " (" << v.group_or_service << ")";
    rationale << " observed " << v.observed << " "
              << (v.direction == CrossDirection::Exceeds ? "exceeds" : "falls below")
              << " adopted bound " << v.bound;
  }
  j["rationale"] = rationale.str();
  j["effective"] = format_sim_time(record.timestamp);
  j["expires"] = format_sim_time(record.expires_at);
  j["review_opened"] = record.review_opened;
  j["published_metrics"] = config.publishing.metrics;
  return j.dump(2) + "\n";
}

}  // namespace r2o
