#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r2o/config.hpp"
#include "r2o/gating.hpp"

namespace r2o::traffic {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Direction of travel. A vehicle heading East sits in the East-heading
// approach queue and is served by the EW phase.
enum class Dir { North = 0, East = 1, South = 2, West = 3 };

enum class Phase { NsGreen = 0, EwGreen = 1, PedWalk = 2 };

std::string to_string(Phase phase);

struct TrafficScenario {
  std::string scenario_id;
  std::uint64_t seed = 1;
  int rows = 4;
  int cols = 4;
  int horizon_s = 7200;

  double sat_flow_veh_s = 0.5;  // per approach during green
  int link_travel_s = 20;
  int bus_link_travel_s = 30;

  int min_green_s = 8;
  int max_green_s = 45;
  int walk_s = 10;
  double ped_pressure_weight = 0.4;

  // Fixed-time fallback ring: NS, EW(+TSP extension), walk.
  int fixed_ns_green_s = 25;
  int fixed_ew_green_s = 25;
  int tsp_extension_cap_s = 10;
  int tsp_detect_horizon_s = 8;

  int corridor_row = 1;  // eastbound transit corridor
  double bus_headway_target_min = 10.0;
  int bus_first_dispatch_s = 120;

  std::vector<std::pair<int, int>> sensitive_sites;  // (row, col)

  // Piecewise-constant demand, one rate per 15-minute interval.
  std::vector<double> vehicle_entry_rate_ns_vph;
  std::vector<double> vehicle_entry_rate_ew_vph;
  double ped_rate_sensitive_per_h = 180.0;
  double ped_rate_other_per_h = 60.0;
  double turn_left = 0.15;
  double turn_right = 0.15;

  // Monitor aggregation and SLA normalization.
  int monitor_window_s = 900;
  int monitor_period_s = 5;
  double ped_wait_sla_s = 60.0;
  double headway_sla_min = 2.0;

  void validate() const;
  double entry_rate_vph(bool ns_heading, SimTime now) const;
};

TrafficScenario load_traffic_scenario(const std::string& path);

struct TrafficReport {
  double veh_delay_mean_s = 0.0;
  double veh_delay_median_s = 0.0;
  double ped_wait_mean_s = 0.0;    // sensitive sites only
  double ped_wait_median_s = 0.0;
  double headway_dev_mean_min = 0.0;
  double headway_dev_median_min = 0.0;
  double headway_dev_p95_min = 0.0;
  long vehicles_entered = 0;
  long vehicles_exited = 0;
  long vehicles_in_network = 0;
  long peds_served_sensitive = 0;
  long peds_waiting_end = 0;
  int buses_completed = 0;
  std::vector<double> bus_exit_s;  // corridor completion times
  double max_ped_red_fallback_s = 0.0;  // over reds fully inside fallback windows
  std::map<std::string, double> phase_green_s;  // "r,c:NS" -> seconds of green
};

enum class ControllerKind { Adaptive, FixedPedRecall, AdaptiveTsp };

ControllerKind controller_for_fallback(const std::string& fallback_name);

// Max-pressure phase choice for one intersection: pressure of a vehicle
// phase is (upstream - downstream) queue mass over the movements it serves;
// the walk phase competes with weight * waiting pedestrians. Ties keep the
// current phase.
Phase select_max_pressure_phase(Phase current, double pressure_ns, double pressure_ew,
                                double ped_pressure);

struct TrafficCaseResult {
  TrafficReport baseline;
  TrafficReport gated;
  GatedTrace trace;  // gated run
  AuditLog audit;
  SimTime fallback_engaged_at = -1;  // first fallback-actuated second, -1 if never
};

// Runs the ungated adaptive baseline and the gated variant. The gated run
// monitors the rolling median pedestrian wait near sensitive sites and bus
// headway compliance as SLA-normalized quality indices.
TrafficCaseResult run_traffic_case(const TrafficScenario& scenario,
                                   const GovernanceConfig& config, RunMode mode);

// Single ungated run under one controller, for oracles and property tests.
TrafficReport run_uncontrolled(const TrafficScenario& scenario, ControllerKind controller);

}  // namespace r2o::traffic
