#pragma once

#include <optional>
#include <string>
#include <vector>

#include "r2o/config.hpp"
#include "r2o/monitors.hpp"
#include "r2o/sim_time.hpp"

namespace r2o {

// One override event. Serialized as one JSON object per line; the field
// names are a stable external surface covered by golden-file tests.
struct AuditRecord {
  std::string id;             // "<scenario>-NNN", unique within a run
  std::string event;          // override_started | override_escalated | override_expired
  bool shadow = false;        // true when recorded from a shadow-mode trial
  SimTime timestamp = 0;
  std::string scenario_id;
  std::string policy_id;
  std::string policy_version;
  OverrideLevel level = OverrideLevel::L1;
  Authority authority = Authority::OperatorStop;
  std::string fallback_name;  // resolved catalog entry
  std::vector<Violation> trigger;
  SimTime expires_at = 0;
  bool review_opened = false;

  std::string to_json_line() const;
  static AuditRecord from_json_line(const std::string& line);
};

// Append-only, in insertion order.
class AuditLog {
 public:
  void append(AuditRecord record) { records_.push_back(std::move(record)); }
  const std::vector<AuditRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  // Newline-delimited records, one JSON object per line.
  std::string to_jsonl() const;
  void write_jsonl(const std::string& path) const;
  static AuditLog read_jsonl(const std::string& path);

 private:
  std::vector<AuditRecord> records_;
};

// Plain-language public notice for one override (the transparency artifact
// published alongside the machine log).
std::string notice_document(const AuditRecord& record, const GovernanceConfig& config);

}  // namespace r2o
