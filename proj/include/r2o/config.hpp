#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace r2o {

enum class OverrideLevel { L1, L2, L3 };
enum class Authority { OperatorStop, MunicipalPause, CivicBoardHold };
enum class Domain { Power, Buildings, Transport };

std::string to_string(OverrideLevel level);
std::string to_string(Authority authority);
std::string to_string(Domain domain);
OverrideLevel level_from_string(const std::string& s);
Authority authority_from_string(const std::string& s);
Domain domain_from_string(const std::string& s);

// Monitor thresholds. Disparity, hazard and downtime are upper bounds
// (crossing at >= triggers); quality floors are lower bounds (<= triggers).
struct Thresholds {
  double disparity_cap = 1.2;          // dimensionless
  double hazard_per_hr = 1e-4;         // events per hour
  double access_downtime_min = 30.0;   // minutes within a trailing 24 h window
  double quality_floor_default = 0.9;  // applied to services without an explicit floor
  std::map<std::string, double> quality_floor;  // service id -> floor in (0, 1]

  double quality_floor_for(const std::string& service) const;
  bool operator==(const Thresholds&) const = default;
};

struct LevelSpec {
  OverrideLevel level = OverrideLevel::L1;
  Authority authority = Authority::OperatorStop;
  std::string fallback_name;  // catalog entry or alias, resolved per domain
  std::chrono::seconds max_duration{0};

  bool operator==(const LevelSpec&) const = default;
};

// Per-domain ordered list of pre-validated fallback states.
struct FallbackCatalog {
  std::map<Domain, std::vector<std::string>> entries;

  bool contains(Domain domain, const std::string& name) const;
  bool operator==(const FallbackCatalog&) const = default;
};

// Level fallback names like "municipal_safe" are schema-level aliases; the
// alias table joins them to a concrete catalog entry per domain.
using AliasTable = std::map<Domain, std::map<std::string, std::string>>;

struct DocumentationReqs {
  bool model_card = true;
  bool datasheet = true;
  bool operator==(const DocumentationReqs&) const = default;
};

struct ReviewStages {
  std::vector<std::string> pre_deploy;
  std::vector<std::string> post_incident;
  bool operator==(const ReviewStages&) const = default;
};

struct Publishing {
  std::string notices;
  std::vector<std::string> metrics;
  bool operator==(const Publishing&) const = default;
};

struct GovernanceConfig {
  Thresholds thresholds;
  std::map<OverrideLevel, LevelSpec> levels;
  FallbackCatalog fallbacks;
  AliasTable aliases;
  // Consecutive completed L2 windows with a recurring violation before L3.
  int l3_persistence_windows = 2;
  DocumentationReqs documentation;
  ReviewStages reviews;
  Publishing publishing;

  bool operator==(const GovernanceConfig&) const = default;
};

// Errors follow the document lifecycle: ParseError for malformed input,
// SchemaError for missing/unknown keys, ValidationError for bad values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct ConfigViolation {
  std::string path;     // e.g. "r2o.levels.L2.fallback"
  std::string message;  // human-readable description

  bool operator==(const ConfigViolation&) const = default;
};

enum class ParseMode { Strict, Lenient };

// Parses a governance document. Strict mode rejects unrecognized keys;
// lenient mode collects them into `warnings` instead. Sections other than
// r2o.thresholds may be omitted and take the default values.
GovernanceConfig parse_config(const std::string& text, ParseMode mode = ParseMode::Strict,
                              std::vector<std::string>* warnings = nullptr);

GovernanceConfig load_config_file(const std::string& path, ParseMode mode = ParseMode::Strict);

// The illustrative default configuration: tau_D 1.2, tau_R 1e-4/hr,
// tau_A 30 min, quality floor 0.9, level durations 4 h / 72 h / 30 d.
GovernanceConfig default_config();

std::string serialize(const GovernanceConfig& config);

// Referential integrity for one domain: every level fallback resolves in the
// catalog (directly or through the alias table) and thresholds are sane.
// Violations are data, not exceptions.
std::vector<ConfigViolation> validate_cross_references(const GovernanceConfig& config,
                                                       Domain domain);

// Resolves a level's fallback name to a concrete catalog entry for `domain`.
// Throws ValidationError when the name dangles (fail closed).
std::string resolve_fallback(const GovernanceConfig& config, Domain domain,
                             const std::string& name);

}  // namespace r2o
