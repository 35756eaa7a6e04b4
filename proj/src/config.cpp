#include "r2o/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace r2o {

namespace {

constexpr std::chrono::seconds kHour{3600};
constexpr std::chrono::seconds kDay{86400};

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

[[noreturn]] void missing_key(const std::string& path) {
  throw SchemaError("missing required key: " + path);
}

// Rejects (strict) or records (lenient) keys outside `known`.
void check_keys(const YAML::Node& node, const std::set<std::string>& known,
                const std::string& path, ParseMode mode, std::vector<std::string>* warnings) {
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (known.count(key)) continue;
    const std::string where = join_path(path, key);
    if (mode == ParseMode::Strict) {
      throw SchemaError("unrecognized key: " + where);
    }
    if (warnings) warnings->push_back("ignored unrecognized key: " + where);
  }
}

YAML::Node require(const YAML::Node& node, const std::string& key, const std::string& path) {
  YAML::Node child = node[key];
  if (!child.IsDefined()) missing_key(join_path(path, key));
  return child;
}

double parse_threshold(const YAML::Node& node, const std::string& path) {
  double v = 0.0;
  try {
    v = node.as<double>();
  } catch (const YAML::Exception&) {
    throw SchemaError("expected a number at " + path);
  }
  if (v < 0.0) throw ValidationError("negative threshold at " + path);
  return v;
}

bool parse_required_flag(const YAML::Node& node, const std::string& path) {
  const std::string s = node.as<std::string>();
  if (s == "required" || s == "true") return true;
  if (s == "optional" || s == "false") return false;
  throw ValidationError("expected required/optional at " + path);
}

std::vector<std::string> parse_string_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw SchemaError("expected a list at " + path);
  std::vector<std::string> out;
  out.reserve(node.size());
  for (const auto& item : node) out.push_back(item.as<std::string>());
  return out;
}

LevelSpec default_level(OverrideLevel level) {
  switch (level) {
    case OverrideLevel::L1:
      return {OverrideLevel::L1, Authority::OperatorStop, "safe_local", 4 * kHour};
    case OverrideLevel::L2:
      return {OverrideLevel::L2, Authority::MunicipalPause, "municipal_safe", 72 * kHour};
    case OverrideLevel::L3:
    default:
      return {OverrideLevel::L3, Authority::CivicBoardHold, "civic_safe", 30 * kDay};
  }
}

FallbackCatalog default_catalog() {
  FallbackCatalog catalog;
  catalog.entries[Domain::Power] = {"n-1_deterministic", "equity_rotations"};
  catalog.entries[Domain::Buildings] = {"comfort_bounds", "no_night_setback_protected"};
  catalog.entries[Domain::Transport] = {"fixed_time_ped_recall", "tsp_enabled"};
  return catalog;
}

// Default join of schema aliases onto each domain's catalog. Note the power
// column: the municipal pause responds to distributional triggers, so it maps
// to the equity rotation plan, while the operator stop maps to the
// deterministic dispatch entry.
AliasTable default_aliases() {
  AliasTable t;
  t[Domain::Power] = {{"safe_local", "n-1_deterministic"},
                      {"municipal_safe", "equity_rotations"},
                      {"civic_safe", "equity_rotations"}};
  t[Domain::Buildings] = {{"safe_local", "comfort_bounds"},
                          {"municipal_safe", "comfort_bounds"},
                          {"civic_safe", "no_night_setback_protected"}};
  t[Domain::Transport] = {{"safe_local", "fixed_time_ped_recall"},
                          {"municipal_safe", "fixed_time_ped_recall"},
                          {"civic_safe", "tsp_enabled"}};
  return t;
}

Thresholds parse_thresholds(const YAML::Node& node, const std::string& path, ParseMode mode,
                            std::vector<std::string>* warnings) {
  check_keys(node,
             {"disparity", "safety_risk_per_hr", "accessibility_downtime_minutes",
              "quality_sla_default", "quality_sla"},
             path, mode, warnings);
  Thresholds t;
  t.disparity_cap = parse_threshold(require(node, "disparity", path), join_path(path, "disparity"));
  t.hazard_per_hr = parse_threshold(require(node, "safety_risk_per_hr", path),
                                    join_path(path, "safety_risk_per_hr"));
  t.access_downtime_min = parse_threshold(require(node, "accessibility_downtime_minutes", path),
                                          join_path(path, "accessibility_downtime_minutes"));
  if (node["quality_sla_default"]) {
    t.quality_floor_default = parse_threshold(node["quality_sla_default"],
                                              join_path(path, "quality_sla_default"));
  }
  if (node["quality_sla"]) {
    for (const auto& kv : node["quality_sla"]) {
      const std::string svc = kv.first.as<std::string>();
      t.quality_floor[svc] =
          parse_threshold(kv.second, join_path(path, "quality_sla." + svc));
    }
  }
  return t;
}

LevelSpec parse_level(const YAML::Node& node, OverrideLevel level, const std::string& path,
                      ParseMode mode, std::vector<std::string>* warnings) {
  check_keys(node, {"fallback", "max_duration_hours", "max_duration_days", "authority"}, path,
             mode, warnings);
  LevelSpec spec = default_level(level);
  spec.fallback_name = require(node, "fallback", path).as<std::string>();
  const bool has_hours = node["max_duration_hours"].IsDefined();
  const bool has_days = node["max_duration_days"].IsDefined();
  if (has_hours && has_days) {
    throw ValidationError("both max_duration_hours and max_duration_days at " + path);
  }
  if (has_hours) {
    spec.max_duration = std::chrono::seconds(
        static_cast<long long>(node["max_duration_hours"].as<double>() * 3600.0));
  } else if (has_days) {
    spec.max_duration = std::chrono::seconds(
        static_cast<long long>(node["max_duration_days"].as<double>() * 86400.0));
  } else {
    missing_key(join_path(path, "max_duration_hours"));
  }
  if (spec.max_duration <= std::chrono::seconds{0}) {
    throw ValidationError("non-positive max_duration at " + path);
  }
  if (node["authority"]) spec.authority = authority_from_string(node["authority"].as<std::string>());
  return spec;
}

void emit_string_list(std::ostringstream& out, const std::vector<std::string>& items) {
  out << "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out << ", ";
    out << "\"" << items[i] << "\"";
  }
  out << "]";
}

std::string format_number(double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  std::string text = s.str();
  // Bare integers would round-trip as YAML ints; keep them floats.
  if (text.find('.') == std::string::npos && text.find('e') == std::string::npos) {
    text += ".0";
  }
  return text;
}

}  // namespace

std::string to_string(OverrideLevel level) {
  switch (level) {
    case OverrideLevel::L1: return "L1";
    case OverrideLevel::L2: return "L2";
    case OverrideLevel::L3: return "L3";
  }
  return "L?";
}

std::string to_string(Authority authority) {
  switch (authority) {
    case Authority::OperatorStop: return "operator_stop";
    case Authority::MunicipalPause: return "municipal_pause";
    case Authority::CivicBoardHold: return "civic_board_hold";
  }
  return "unknown";
}

std::string to_string(Domain domain) {
  switch (domain) {
    case Domain::Power: return "power";
    case Domain::Buildings: return "buildings";
    case Domain::Transport: return "transport";
  }
  return "unknown";
}

OverrideLevel level_from_string(const std::string& s) {
  if (s == "L1") return OverrideLevel::L1;
  if (s == "L2") return OverrideLevel::L2;
  if (s == "L3") return OverrideLevel::L3;
  throw ValidationError("unknown override level: " + s);
}

Authority authority_from_string(const std::string& s) {
  if (s == "operator_stop") return Authority::OperatorStop;
  if (s == "municipal_pause") return Authority::MunicipalPause;
  if (s == "civic_board_hold") return Authority::CivicBoardHold;
  throw ValidationError("unknown authority: " + s);
}

Domain domain_from_string(const std::string& s) {
  if (s == "power") return Domain::Power;
  if (s == "buildings") return Domain::Buildings;
  if (s == "transport") return Domain::Transport;
  throw ValidationError("unknown domain: " + s);
}

double Thresholds::quality_floor_for(const std::string& service) const {
  auto it = quality_floor.find(service);
  return it == quality_floor.end() ? quality_floor_default : it->second;
}

bool FallbackCatalog::contains(Domain domain, const std::string& name) const {
  auto it = entries.find(domain);
  if (it == entries.end()) return false;
  return std::find(it->second.begin(), it->second.end(), name) != it->second.end();
}

GovernanceConfig parse_config(const std::string& text, ParseMode mode,
                              std::vector<std::string>* warnings) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream msg;
    msg << "parse error at line " << (e.mark.line + 1) << ", column " << (e.mark.column + 1)
        << ": " << e.msg;
    throw ParseError(msg.str());
  }
  if (!root.IsMap()) throw ParseError("document root is not a mapping");

  check_keys(root, {"governance"}, "", mode, warnings);
  YAML::Node gov = require(root, "governance", "");
  check_keys(gov, {"r2o", "documentation", "reviews", "publishing"}, "governance", mode, warnings);

  YAML::Node r2o_node = require(gov, "r2o", "governance");
  check_keys(r2o_node, {"thresholds", "levels", "fallbacks", "fallback_aliases", "escalation"},
             "r2o", mode, warnings);

  GovernanceConfig config;
  config.thresholds =
      parse_thresholds(require(r2o_node, "thresholds", "r2o"), "r2o.thresholds", mode, warnings);

  for (OverrideLevel level : {OverrideLevel::L1, OverrideLevel::L2, OverrideLevel::L3}) {
    config.levels[level] = default_level(level);
  }
  if (r2o_node["levels"]) {
    const YAML::Node levels = r2o_node["levels"];
    check_keys(levels, {"L1", "L2", "L3"}, "r2o.levels", mode, warnings);
    for (const auto& kv : levels) {
      const std::string name = kv.first.as<std::string>();
      if (name != "L1" && name != "L2" && name != "L3") continue;  // lenient leftover
      const OverrideLevel level = level_from_string(name);
      config.levels[level] = parse_level(kv.second, level, "r2o.levels." + name, mode, warnings);
    }
  }

  config.fallbacks = default_catalog();
  if (r2o_node["fallbacks"]) {
    const YAML::Node fb = r2o_node["fallbacks"];
    check_keys(fb, {"power", "buildings", "transport"}, "r2o.fallbacks", mode, warnings);
    config.fallbacks.entries.clear();
    for (const auto& kv : fb) {
      const std::string name = kv.first.as<std::string>();
      if (name != "power" && name != "buildings" && name != "transport") continue;
      config.fallbacks.entries[domain_from_string(name)] =
          parse_string_list(kv.second, "r2o.fallbacks." + name);
    }
  }

  config.aliases = default_aliases();
  if (r2o_node["fallback_aliases"]) {
    const YAML::Node aliases = r2o_node["fallback_aliases"];
    check_keys(aliases, {"power", "buildings", "transport"}, "r2o.fallback_aliases", mode,
               warnings);
    config.aliases.clear();
    for (const auto& kv : aliases) {
      const std::string name = kv.first.as<std::string>();
      if (name != "power" && name != "buildings" && name != "transport") continue;
      std::map<std::string, std::string> table;
      for (const auto& entry : kv.second) {
        table[entry.first.as<std::string>()] = entry.second.as<std::string>();
      }
      config.aliases[domain_from_string(name)] = std::move(table);
    }
  }

  if (r2o_node["escalation"]) {
    const YAML::Node esc = r2o_node["escalation"];
    check_keys(esc, {"l3_persistence_windows"}, "r2o.escalation", mode, warnings);
    if (esc["l3_persistence_windows"]) {
      config.l3_persistence_windows = esc["l3_persistence_windows"].as<int>();
      if (config.l3_persistence_windows < 1) {
        throw ValidationError("r2o.escalation.l3_persistence_windows must be >= 1");
      }
    }
  }

  if (gov["documentation"]) {
    const YAML::Node doc = gov["documentation"];
    check_keys(doc, {"model_card", "datasheet"}, "governance.documentation", mode, warnings);
    config.documentation.model_card =
        parse_required_flag(require(doc, "model_card", "governance.documentation"),
                            "governance.documentation.model_card");
    config.documentation.datasheet =
        parse_required_flag(require(doc, "datasheet", "governance.documentation"),
                            "governance.documentation.datasheet");
  }

  config.reviews = {{"scenario_walkthrough", "shadow_mode", "civic_tabletop"},
                    {"blameless_review", "public_report"}};
  if (gov["reviews"]) {
    const YAML::Node reviews = gov["reviews"];
    check_keys(reviews, {"pre_deploy", "post_incident"}, "governance.reviews", mode, warnings);
    if (reviews["pre_deploy"]) {
      config.reviews.pre_deploy =
          parse_string_list(reviews["pre_deploy"], "governance.reviews.pre_deploy");
    }
    if (reviews["post_incident"]) {
      config.reviews.post_incident =
          parse_string_list(reviews["post_incident"], "governance.reviews.post_incident");
    }
  }

  config.publishing = {"open_data_portal", {"disparity", "risk", "accessibility", "quality_SLA"}};
  if (gov["publishing"]) {
    const YAML::Node pub = gov["publishing"];
    check_keys(pub, {"notices", "metrics"}, "governance.publishing", mode, warnings);
    if (pub["notices"]) config.publishing.notices = pub["notices"].as<std::string>();
    if (pub["metrics"]) {
      config.publishing.metrics =
          parse_string_list(pub["metrics"], "governance.publishing.metrics");
    }
  }

  return config;
}

GovernanceConfig load_config_file(const std::string& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), mode);
}

GovernanceConfig default_config() {
  GovernanceConfig config;
  config.thresholds = Thresholds{};
  for (OverrideLevel level : {OverrideLevel::L1, OverrideLevel::L2, OverrideLevel::L3}) {
    config.levels[level] = default_level(level);
  }
  config.fallbacks = default_catalog();
  config.aliases = default_aliases();
  config.documentation = DocumentationReqs{};
  config.reviews = {{"scenario_walkthrough", "shadow_mode", "civic_tabletop"},
                    {"blameless_review", "public_report"}};
  config.publishing = {"open_data_portal", {"disparity", "risk", "accessibility", "quality_SLA"}};
  return config;
}

std::string serialize(const GovernanceConfig& config) {
  std::ostringstream out;
  out << "governance:\n";
  out << "  r2o:\n";
  out << "    thresholds:\n";
  out << "      disparity: " << format_number(config.thresholds.disparity_cap) << "\n";
  out << "      safety_risk_per_hr: " << format_number(config.thresholds.hazard_per_hr) << "\n";
  out << "      accessibility_downtime_minutes: "
      << format_number(config.thresholds.access_downtime_min) << "\n";
  out << "      quality_sla_default: " << format_number(config.thresholds.quality_floor_default)
      << "\n";
  if (!config.thresholds.quality_floor.empty()) {
    out << "      quality_sla:\n";
    for (const auto& [svc, floor] : config.thresholds.quality_floor) {
      out << "        " << svc << ": " << format_number(floor) << "\n";
    }
  }
  out << "    levels:\n";
  for (const auto& [level, spec] : config.levels) {
    out << "      " << to_string(level) << ": { fallback: \"" << spec.fallback_name << "\", ";
    const long long secs = spec.max_duration.count();
    if (secs % 86400 == 0) {
      out << "max_duration_days: " << (secs / 86400);
    } else {
      out << "max_duration_hours: " << (secs / 3600);
    }
    out << ", authority: " << to_string(spec.authority) << " }\n";
  }
  out << "    fallbacks:\n";
  for (const auto& [domain, names] : config.fallbacks.entries) {
    out << "      " << to_string(domain) << ": ";
    emit_string_list(out, names);
    out << "\n";
  }
  out << "    fallback_aliases:\n";
  for (const auto& [domain, table] : config.aliases) {
    out << "      " << to_string(domain) << ":\n";
    for (const auto& [alias, target] : table) {
      out << "        " << alias << ": \"" << target << "\"\n";
    }
  }
  out << "    escalation:\n";
  out << "      l3_persistence_windows: " << config.l3_persistence_windows << "\n";
  out << "  documentation:\n";
  out << "    model_card: " << (config.documentation.model_card ? "required" : "optional") << "\n";
  out << "    datasheet: " << (config.documentation.datasheet ? "required" : "optional") << "\n";
  out << "  reviews:\n";
  out << "    pre_deploy: ";
  emit_string_list(out, config.reviews.pre_deploy);
  out << "\n    post_incident: ";
  emit_string_list(out, config.reviews.post_incident);
  out << "\n  publishing:\n";
  out << "    notices: \"" << config.publishing.notices << "\"\n";
  out << "    metrics: ";
  emit_string_list(out, config.publishing.metrics);
  out << "\n";
  return out.str();
}

std::vector<ConfigViolation> validate_cross_references(const GovernanceConfig& config,
                                                       Domain domain) {
  std::vector<ConfigViolation> violations;

  if (!(config.thresholds.disparity_cap > 0.0)) {
    violations.push_back({"r2o.thresholds.disparity", "disparity cap must be > 0"});
  }
  if (!(config.thresholds.hazard_per_hr > 0.0)) {
    violations.push_back({"r2o.thresholds.safety_risk_per_hr", "hazard threshold must be > 0"});
  }
  if (!(config.thresholds.access_downtime_min > 0.0)) {
    violations.push_back(
        {"r2o.thresholds.accessibility_downtime_minutes", "downtime threshold must be > 0"});
  }
  auto check_floor = [&](const std::string& name, double floor) {
    if (!(floor > 0.0) || floor > 1.0) {
      violations.push_back({"r2o.thresholds.quality_sla." + name,
                            "quality floor must be in (0, 1]"});
    }
  };
  check_floor("default", config.thresholds.quality_floor_default);
  for (const auto& [svc, floor] : config.thresholds.quality_floor) check_floor(svc, floor);

  std::chrono::seconds previous{0};
  for (const auto& [level, spec] : config.levels) {
    if (spec.max_duration <= previous) {
      violations.push_back({"r2o.levels." + to_string(level),
                            "max_duration must strictly increase with level"});
    }
    previous = spec.max_duration;

    const std::string& name = spec.fallback_name;
    if (config.fallbacks.contains(domain, name)) continue;
    auto domain_aliases = config.aliases.find(domain);
    bool resolved = false;
    if (domain_aliases != config.aliases.end()) {
      auto it = domain_aliases->second.find(name);
      resolved = it != domain_aliases->second.end() &&
                 config.fallbacks.contains(domain, it->second);
    }
    if (!resolved) {
      violations.push_back({"r2o.levels." + to_string(level) + ".fallback",
                            "fallback \"" + name + "\" does not resolve in the " +
                                to_string(domain) + " catalog"});
    }
  }

  return violations;
}

std::string resolve_fallback(const GovernanceConfig& config, Domain domain,
                             const std::string& name) {
  if (config.fallbacks.contains(domain, name)) return name;
  auto domain_aliases = config.aliases.find(domain);
  if (domain_aliases != config.aliases.end()) {
    auto it = domain_aliases->second.find(name);
    if (it != domain_aliases->second.end() && config.fallbacks.contains(domain, it->second)) {
      return it->second;
    }
  }
  throw ValidationError("fallback \"" + name + "\" does not resolve in the " + to_string(domain) +
                        " catalog");
}

}  // namespace r2o
