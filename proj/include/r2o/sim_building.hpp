#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "r2o/config.hpp"
#include "r2o/gating.hpp"

namespace r2o::building {

constexpr int kSteps = 96;
constexpr double kStepHours = 0.25;

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuildingParams {
  double thermal_resistance_k_per_kw = 0.1;    // envelope R
  double thermal_capacitance_kwh_per_k = 160;  // lumped C
  double gain_per_occupant_kw = 0.1;
  double hvac_capacity_kw = 450;
  double hvac_cop = 1.0;
  double base_load_kw = 20;  // non-HVAC electrical load, dissipates indoors

  double co2_outdoor_ppm = 420;
  double co2_gen_ppm_per_occ_hr = 10;  // well-mixed generation per occupant
  double vent_ach_occupied = 2.0;
  double vent_ach_unoccupied = 0.3;
  double vent_ach_max = 4.0;  // demand-controlled ceiling under the override
};

struct ComfortBounds {
  double t_min_occupied_c = 20.0;
  double t_max_occupied_c = 24.0;
  double co2_max_ppm = 1000.0;
};

struct OccupancySchedule {
  std::vector<int> occupants;            // per step
  std::vector<bool> protected_present;   // per step

  bool occupied(int t) const { return occupants[t] > 0; }
};

struct AssertionInterval {
  SimTime start = 0;
  SimTime end = 0;

  bool covers(SimTime t) const { return t >= start && t < end; }
};

struct BuildingScenario {
  std::string scenario_id;
  std::uint64_t seed = 0;
  BuildingParams params;
  ComfortBounds comfort;
  std::vector<double> outdoor_temp_c;  // 24 hourly values
  OccupancySchedule occupancy;
  std::vector<AssertionInterval> assertions;  // staff-asserted occupancy
  double comfort_setpoint_c = 21.0;
  double setback_setpoint_c = 15.0;
  SimTime comfort_start = 7 * kSecondsPerHour;
  SimTime setback_start = 20 * kSecondsPerHour;
  double initial_temp_c = 21.0;

  void validate() const;
  double outdoor_at(int t) const { return outdoor_temp_c[(t * 900 / 3600) % 24]; }
};

BuildingScenario load_building_scenario(const std::string& path);

struct ThermalState {
  double temp_c = 21.0;
  double co2_ppm = 420.0;
};

// Forward-Euler 1R1C update plus a well-mixed CO2 balance.
ThermalState step_thermal(const ThermalState& state, const BuildingParams& params,
                          double outdoor_c, double hvac_kw, int occupants, double vent_ach,
                          double dt_hours);

// Night-setback schedule: comfort setpoint inside [comfort_start,
// setback_start), setback setpoint otherwise.
double baseline_setpoint(const BuildingScenario& scenario, SimTime time_of_day);

struct RunStats {
  std::vector<double> temp_c;     // end-of-step, kSteps entries
  std::vector<double> co2_ppm;
  std::vector<double> hvac_kw;
  double energy_kwh = 0.0;        // hvac/cop + base load
  int discomfort_hours = 0;       // whole occupied hours with a violating step
  double discomfort_minutes = 0;  // protected-present minutes outside bounds
  double max_co2_ppm = 0.0;
  double min_temp_protected_c = 1e9;  // over protected-present steps
};

enum class ControlVariant {
  Baseline,          // scheduler only
  AssertedOverride,  // scheduler + comfort floor during asserted intervals
  Gated,             // scheduler + gate-driven comfort fallback
};

struct BuildingCaseResult {
  RunStats baseline;
  RunStats with_override;  // asserted-occupancy variant
  RunStats gated;
  double energy_delta_kwh = 0.0;  // with_override minus baseline
  GatedTrace trace;               // gated variant
  AuditLog audit;
};

// Runs baseline, asserted-override and gated variants on the same weather
// and occupancy. The gate treats accumulated protected discomfort minutes
// (trailing 24 h, observed plus the candidate step's prediction) as
// accessibility downtime.
BuildingCaseResult run_building_case(const BuildingScenario& scenario,
                                     const GovernanceConfig& config, RunMode mode);

}  // namespace r2o::building
