#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "r2o/config.hpp"
#include "r2o/sim_time.hpp"

namespace r2o {

class MonitorInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One group's harm/baseline pair for a step, in domain units
// (MWh unserved over MWh demand, discomfort-hours over occupied hours, ...).
struct GroupOutcome {
  std::string group_id;
  bool is_protected = false;
  double harm = 0.0;      // >= 0
  double baseline = 0.0;  // > 0 wherever a ratio is taken over it
};

// The per-step monitor vector.
struct MonitorVector {
  std::int64_t step = 0;
  double disparity = 1.0;      // D_t, dimensionless, may be +inf
  double hazard_per_hr = 0.0;  // R_t
  std::map<std::string, double> access_downtime_min;  // A_t(g), trailing 24 h
  std::map<std::string, double> quality;              // Q_t per service, in [0, 1]
};

enum class MonitorKind { Disparity, Hazard, Accessibility, Quality };
enum class CrossDirection { Exceeds, FallsBelow };

std::string to_string(MonitorKind kind);
std::string to_string(CrossDirection direction);

struct Violation {
  MonitorKind kind = MonitorKind::Disparity;
  double observed = 0.0;
  double bound = 0.0;
  CrossDirection direction = CrossDirection::Exceeds;
  std::string group_or_service;  // empty for aggregate monitors

  bool operator==(const Violation&) const = default;
};

// Ratio of normalized harm rates, protected over complement.
// Both harms zero reads as "no disparity" and returns 1; a harmed protected
// group against a harm-free complement returns +inf (always a violation).
double disparity_ratio(const GroupOutcome& protected_group, const GroupOutcome& complement);

// Cumulative disparity over a window: sums harms and baselines first, then
// takes one ratio. With every step satisfying the per-step equity cap, the
// result stays within the cap (the bound the equity fallbacks rely on).
double window_disparity(const std::vector<std::pair<GroupOutcome, GroupOutcome>>& series);

struct OutageInterval {
  SimTime start = 0;
  SimTime end = 0;  // exclusive
};

// Minutes of outage intersecting [now - 24 h, now].
double accessibility_downtime(const std::vector<OutageInterval>& events, SimTime now);

// Hazard proxies are produced by each scenario; this is a validating
// pass-through so the units contract lives in one place.
double hazard_rate(double domain_signal_per_hr);

// One violation per crossed bound. Crossings are boundary-inclusive:
// >= for disparity/hazard/downtime, <= for quality floors.
std::vector<Violation> evaluate_thresholds(const MonitorVector& m, const Thresholds& tau);

// Delimited export (t, D_t, R_t, A_t per group, Q_t per service) for the
// publishing stage. Group/service columns are the union over the series,
// in sorted order.
std::string monitor_series_csv(const std::vector<MonitorVector>& series);

}  // namespace r2o
