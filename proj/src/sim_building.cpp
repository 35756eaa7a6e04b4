#include "r2o/sim_building.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace r2o::building {

namespace {

constexpr double kTempEps = 1e-9;

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// HVAC heat needed to land exactly on the setpoint next step, saturated at
// the plant capacity. Heating only; above-setpoint states coast.
double hvac_command(const ThermalState& state, const BuildingParams& p, double outdoor_c,
                    double setpoint_c, int occupants, double dt_hours) {
  const double gains = p.gain_per_occupant_kw * occupants + p.base_load_kw;
  const double loss = (state.temp_c - outdoor_c) / p.thermal_resistance_k_per_kw;
  const double needed =
      (setpoint_c - state.temp_c) * p.thermal_capacitance_kwh_per_k / dt_hours + loss - gains;
  return clamp(needed, 0.0, p.hvac_capacity_kw);
}

}  // namespace

void BuildingScenario::validate() const {
  if (outdoor_temp_c.size() != 24) throw ScenarioError("outdoor series must have 24 hourly values");
  if (static_cast<int>(occupancy.occupants.size()) != kSteps ||
      static_cast<int>(occupancy.protected_present.size()) != kSteps) {
    throw ScenarioError("occupancy schedule must cover 96 steps");
  }
  for (int t = 0; t < kSteps; ++t) {
    if (occupancy.protected_present[t] && occupancy.occupants[t] <= 0) {
      throw ScenarioError("protected presence requires occupants > 0 at step " +
                          std::to_string(t));
    }
  }
  const BuildingParams& p = params;
  for (double v : {p.thermal_resistance_k_per_kw, p.thermal_capacitance_kwh_per_k,
                   p.gain_per_occupant_kw, p.hvac_capacity_kw, p.hvac_cop, p.base_load_kw}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ScenarioError("building params must be positive");
  }
  if (!(comfort.t_min_occupied_c < comfort.t_max_occupied_c)) {
    throw ScenarioError("comfort band is empty");
  }
  for (const auto& a : assertions) {
    if (a.end <= a.start) throw ScenarioError("assertion interval is reversed");
  }
}

BuildingScenario load_building_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario: " + path);
  YAML::Node root = YAML::Load(in);

  BuildingScenario s;
  s.scenario_id = root["scenario_id"].as<std::string>("building_case");
  s.seed = root["seed"].as<std::uint64_t>(0);

  const YAML::Node p = root["params"];
  if (p) {
    s.params.thermal_resistance_k_per_kw =
        p["thermal_resistance_k_per_kw"].as<double>(s.params.thermal_resistance_k_per_kw);
    s.params.thermal_capacitance_kwh_per_k =
        p["thermal_capacitance_kwh_per_k"].as<double>(s.params.thermal_capacitance_kwh_per_k);
    s.params.gain_per_occupant_kw =
        p["gain_per_occupant_kw"].as<double>(s.params.gain_per_occupant_kw);
    s.params.hvac_capacity_kw = p["hvac_capacity_kw"].as<double>(s.params.hvac_capacity_kw);
    s.params.hvac_cop = p["hvac_cop"].as<double>(s.params.hvac_cop);
    s.params.base_load_kw = p["base_load_kw"].as<double>(s.params.base_load_kw);
    s.params.co2_gen_ppm_per_occ_hr =
        p["co2_gen_ppm_per_occ_hr"].as<double>(s.params.co2_gen_ppm_per_occ_hr);
    s.params.vent_ach_occupied = p["vent_ach_occupied"].as<double>(s.params.vent_ach_occupied);
    s.params.vent_ach_unoccupied =
        p["vent_ach_unoccupied"].as<double>(s.params.vent_ach_unoccupied);
    s.params.vent_ach_max = p["vent_ach_max"].as<double>(s.params.vent_ach_max);
  }
  s.outdoor_temp_c = root["outdoor_temp_c"].as<std::vector<double>>();

  s.occupancy.occupants.assign(kSteps, 0);
  s.occupancy.protected_present.assign(kSteps, false);
  for (const auto& block : root["occupancy"]) {
    const double start_h = block["start_hour"].as<double>();
    const double end_h = block["end_hour"].as<double>();
    const int count = block["occupants"].as<int>();
    const bool prot = block["protected"].as<bool>(false);
    for (int t = 0; t < kSteps; ++t) {
      const double h = t * kStepHours;
      if (h >= start_h && h < end_h) {
        s.occupancy.occupants[t] += count;
        if (prot) s.occupancy.protected_present[t] = true;
      }
    }
  }

  for (const auto& node : root["assertions"]) {
    AssertionInterval a;
    a.start = static_cast<SimTime>(node["start_hour"].as<double>() * kSecondsPerHour);
    a.end = static_cast<SimTime>(node["end_hour"].as<double>() * kSecondsPerHour);
    s.assertions.push_back(a);
  }

  s.comfort_setpoint_c = root["comfort_setpoint_c"].as<double>(s.comfort_setpoint_c);
  s.setback_setpoint_c = root["setback_setpoint_c"].as<double>(s.setback_setpoint_c);
  if (root["comfort_start_hour"]) {
    s.comfort_start =
        static_cast<SimTime>(root["comfort_start_hour"].as<double>() * kSecondsPerHour);
  }
  if (root["setback_start_hour"]) {
    s.setback_start =
        static_cast<SimTime>(root["setback_start_hour"].as<double>() * kSecondsPerHour);
  }
  s.initial_temp_c = root["initial_temp_c"].as<double>(s.initial_temp_c);
  s.validate();
  return s;
}

ThermalState step_thermal(const ThermalState& state, const BuildingParams& params,
                          double outdoor_c, double hvac_kw, int occupants, double vent_ach,
                          double dt_hours) {
  if (!std::isfinite(state.temp_c) || !std::isfinite(hvac_kw) || !std::isfinite(outdoor_c) ||
      dt_hours <= 0.0) {
    throw ScenarioError("non-finite thermal step inputs");
  }
  ThermalState next = state;
  const double gains = params.gain_per_occupant_kw * occupants + params.base_load_kw;
  const double net_kw =
      hvac_kw + gains - (state.temp_c - outdoor_c) / params.thermal_resistance_k_per_kw;
  next.temp_c = state.temp_c + dt_hours * net_kw / params.thermal_capacitance_kwh_per_k;

  const double generation = params.co2_gen_ppm_per_occ_hr * occupants;
  const double removal = vent_ach * (state.co2_ppm - params.co2_outdoor_ppm);
  next.co2_ppm = std::max(params.co2_outdoor_ppm, state.co2_ppm + dt_hours * (generation - removal));
  return next;
}

double baseline_setpoint(const BuildingScenario& scenario, SimTime time_of_day) {
  const SimTime t = ((time_of_day % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
  if (t >= scenario.comfort_start && t < scenario.setback_start) {
    return scenario.comfort_setpoint_c;
  }
  return scenario.setback_setpoint_c;
}

namespace {

struct StepRecord {
  ThermalState state;
  double hvac_kw = 0.0;
  bool discomfort = false;  // protected present and outside the comfort band
};

bool outside_band(const ThermalState& st, const ComfortBounds& b) {
  return st.temp_c < b.t_min_occupied_c - kTempEps || st.temp_c > b.t_max_occupied_c + kTempEps;
}

}  // namespace

BuildingCaseResult run_building_case(const BuildingScenario& scenario,
                                     const GovernanceConfig& config, RunMode mode) {
  scenario.validate();
  const auto config_violations = validate_cross_references(config, Domain::Buildings);
  if (!config_violations.empty()) {
    throw ValidationError("config fails cross-validation: " + config_violations.front().path);
  }

  BuildingCaseResult result;
  result.trace.scenario_id = scenario.scenario_id;
  result.trace.mode = mode;

  OverrideGate gate(config, Domain::Buildings, mode, scenario.scenario_id,
                    {"setback_scheduler", "v1"}, &result.audit);

  const BuildingParams& p = scenario.params;
  const ComfortBounds& bounds = scenario.comfort;

  auto run_variant = [&](ControlVariant variant) {
    RunStats stats;
    ThermalState state{scenario.initial_temp_c, p.co2_outdoor_ppm};
    std::set<int> discomfort_wall_hours;
    std::vector<double> discomfort_min_series(kSteps, 0.0);

    for (int t = 0; t < kSteps; ++t) {
      const SimTime now = static_cast<SimTime>(t) * 900;
      const double outdoor = scenario.outdoor_at(t);
      const int occupants = scenario.occupancy.occupants[t];
      const bool protected_now = scenario.occupancy.protected_present[t];

      double setpoint = baseline_setpoint(scenario, now);
      double vent = scenario.occupancy.occupied(t) ? p.vent_ach_occupied : p.vent_ach_unoccupied;

      bool comfort_floor = false;
      if (variant == ControlVariant::AssertedOverride) {
        for (const auto& a : scenario.assertions) {
          if (a.covers(now)) comfort_floor = true;
        }
      } else if (variant == ControlVariant::Gated) {
        // Candidate action: the scheduler as-is. The gate decides from the
        // accumulated observation plus this step's predicted discomfort.
        const double candidate_hvac =
            hvac_command(state, p, outdoor, setpoint, occupants, kStepHours);
        const ThermalState predicted =
            step_thermal(state, p, outdoor, candidate_hvac, occupants, vent, kStepHours);
        double observed_min = 0.0;
        for (int k = 0; k < t; ++k) observed_min += discomfort_min_series[k];
        double predicted_min = 0.0;
        if (protected_now && outside_band(predicted, bounds)) predicted_min = 15.0;

        MonitorVector m;
        m.step = t;
        m.access_downtime_min["seniors"] = observed_min + predicted_min;
        const GateDecision decision = gate.step(m, now);

        StepTrace row;
        row.t = now;
        row.source = decision.action_source;
        row.would_be_fallback = mode == RunMode::Shadow && decision.override_state.active;
        if (decision.override_state.active) {
          row.level = to_string(decision.override_state.level);
          row.fallback = decision.override_state.fallback_name;
        }
        row.audit_id = decision.audit_id;
        result.trace.steps.push_back(std::move(row));
        result.trace.monitors.push_back(std::move(m));

        comfort_floor = decision.action_source == ActionSource::Fallback;
      }

      if (comfort_floor && protected_now) {
        setpoint = std::max(setpoint, bounds.t_min_occupied_c);
      }

      double hvac = hvac_command(state, p, outdoor, setpoint, occupants, kStepHours);
      ThermalState next = step_thermal(state, p, outdoor, hvac, occupants, vent, kStepHours);
      if (comfort_floor && next.co2_ppm >= bounds.co2_max_ppm) {
        vent = p.vent_ach_max;
        next = step_thermal(state, p, outdoor, hvac, occupants, vent, kStepHours);
      }
      state = next;

      stats.temp_c.push_back(state.temp_c);
      stats.co2_ppm.push_back(state.co2_ppm);
      stats.hvac_kw.push_back(hvac);
      stats.energy_kwh += hvac / p.hvac_cop * kStepHours + p.base_load_kw * kStepHours;
      stats.max_co2_ppm = std::max(stats.max_co2_ppm, state.co2_ppm);

      if (protected_now) {
        stats.min_temp_protected_c = std::min(stats.min_temp_protected_c, state.temp_c);
        if (outside_band(state, bounds)) {
          discomfort_min_series[t] = 15.0;
          stats.discomfort_minutes += 15.0;
          discomfort_wall_hours.insert(t / 4);
        }
      }
    }
    stats.discomfort_hours = static_cast<int>(discomfort_wall_hours.size());
    return stats;
  };

  result.baseline = run_variant(ControlVariant::Baseline);
  result.with_override = run_variant(ControlVariant::AssertedOverride);
  result.gated = run_variant(ControlVariant::Gated);
  gate.finalize(static_cast<SimTime>(kSteps) * 900);
  result.energy_delta_kwh = result.with_override.energy_kwh - result.baseline.energy_kwh;
  return result;
}

}  // namespace r2o::building
