#include "r2o/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace r2o {

namespace {

double ratio_of_rates(double harm_p, double base_p, double harm_c, double base_c) {
  if (harm_p == 0.0 && harm_c == 0.0) return 1.0;
  if (base_p <= 0.0 || base_c <= 0.0) {
    throw MonitorInputError("disparity requires positive baselines");
  }
  const double rate_c = harm_c / base_c;
  if (rate_c == 0.0) return std::numeric_limits<double>::infinity();
  return (harm_p / base_p) / rate_c;
}

void check_outcome(const GroupOutcome& g) {
  if (g.harm < 0.0 || !std::isfinite(g.harm)) {
    throw MonitorInputError("harm must be finite and >= 0 for group " + g.group_id);
  }
  if (!std::isfinite(g.baseline)) {
    throw MonitorInputError("baseline must be finite for group " + g.group_id);
  }
}

std::string format_cell(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace

std::string to_string(MonitorKind kind) {
  switch (kind) {
    case MonitorKind::Disparity: return "disparity";
    case MonitorKind::Hazard: return "hazard";
    case MonitorKind::Accessibility: return "accessibility";
    case MonitorKind::Quality: return "quality";
  }
  return "unknown";
}

std::string to_string(CrossDirection direction) {
  return direction == CrossDirection::Exceeds ? "exceeds" : "falls_below";
}

double disparity_ratio(const GroupOutcome& protected_group, const GroupOutcome& complement) {
  check_outcome(protected_group);
  check_outcome(complement);
  return ratio_of_rates(protected_group.harm, protected_group.baseline, complement.harm,
                        complement.baseline);
}

double window_disparity(const std::vector<std::pair<GroupOutcome, GroupOutcome>>& series) {
  if (series.empty()) throw MonitorInputError("window_disparity over an empty series");
  double harm_p = 0.0, base_p = 0.0, harm_c = 0.0, base_c = 0.0;
  for (const auto& [p, c] : series) {
    check_outcome(p);
    check_outcome(c);
    harm_p += p.harm;
    base_p += p.baseline;
    harm_c += c.harm;
    base_c += c.baseline;
  }
  return ratio_of_rates(harm_p, base_p, harm_c, base_c);
}

double accessibility_downtime(const std::vector<OutageInterval>& events, SimTime now) {
  const SimTime window_start = now - kSecondsPerDay;
  double seconds = 0.0;
  for (const auto& ev : events) {
    if (ev.end < ev.start) throw MonitorInputError("reversed outage interval");
    const SimTime lo = std::max(ev.start, window_start);
    const SimTime hi = std::min(ev.end, now);
    if (hi > lo) seconds += static_cast<double>(hi - lo);
  }
  return seconds / 60.0;
}

double hazard_rate(double domain_signal_per_hr) {
  if (domain_signal_per_hr < 0.0 || !std::isfinite(domain_signal_per_hr)) {
    throw MonitorInputError("hazard proxy must be finite and >= 0");
  }
  return domain_signal_per_hr;
}

std::vector<Violation> evaluate_thresholds(const MonitorVector& m, const Thresholds& tau) {
  std::vector<Violation> out;
  if (m.disparity >= tau.disparity_cap) {
    out.push_back({MonitorKind::Disparity, m.disparity, tau.disparity_cap,
                   CrossDirection::Exceeds, ""});
  }
  if (m.hazard_per_hr >= tau.hazard_per_hr) {
    out.push_back({MonitorKind::Hazard, m.hazard_per_hr, tau.hazard_per_hr,
                   CrossDirection::Exceeds, ""});
  }
  for (const auto& [group, minutes] : m.access_downtime_min) {
    if (minutes >= tau.access_downtime_min) {
      out.push_back({MonitorKind::Accessibility, minutes, tau.access_downtime_min,
                     CrossDirection::Exceeds, group});
    }
  }
  for (const auto& [service, q] : m.quality) {
    const double floor = tau.quality_floor_for(service);
    if (q <= floor) {
      out.push_back({MonitorKind::Quality, q, floor, CrossDirection::FallsBelow, service});
    }
  }
  return out;
}

std::string monitor_series_csv(const std::vector<MonitorVector>& series) {
  std::set<std::string> groups, services;
  for (const auto& m : series) {
    for (const auto& [g, _] : m.access_downtime_min) groups.insert(g);
    for (const auto& [s, _] : m.quality) services.insert(s);
  }
  std::ostringstream out;
  out << "t,disparity,hazard_per_hr";
  for (const auto& g : groups) out << ",access_min_" << g;
  for (const auto& s : services) out << ",quality_" << s;
  out << "\n";
  for (const auto& m : series) {
    out << m.step << "," << format_cell(m.disparity) << "," << format_cell(m.hazard_per_hr);
    for (const auto& g : groups) {
      auto it = m.access_downtime_min.find(g);
      out << "," << format_cell(it == m.access_downtime_min.end() ? 0.0 : it->second);
    }
    for (const auto& s : services) {
      auto it = m.quality.find(s);
      out << "," << format_cell(it == m.quality.end() ? 1.0 : it->second);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace r2o
