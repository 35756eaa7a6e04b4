// Scratch calibration probe; not installed.
#include <cstdio>

#include "r2o/artifacts.hpp"
#include "r2o/sim_building.hpp"
#include "r2o/sim_power.hpp"
#include "r2o/sim_traffic.hpp"

using namespace r2o;

int main() {
  const auto config = default_config();

  {
    const auto scenario = power::load_power_scenario("fixtures/power_case1.yaml");
    const auto run = power::run_power_case(scenario, config, RunMode::Actuated);
    std::printf("POWER baseline: ENS %.4f A %.4f B %.4f D %.4f minviol %d\n",
                run.baseline.ens_total_mwh, run.baseline.ens_protected_mwh,
                run.baseline.ens_general_mwh, run.baseline.disparity.value_or(-1),
                run.baseline.protected_min_violations);
    std::printf("POWER gated   : ENS %.9f A %.4f B %.4f D %.4f relaxed %d audits %zu\n",
                run.gated.ens_total_mwh, run.gated.ens_protected_mwh,
                run.gated.ens_general_mwh, run.gated.disparity.value_or(-1),
                run.applied_plan.equity_cap_relaxed, run.audit.records().size());
    std::printf("POWER ENS diff: %.12f\n",
                run.gated.ens_total_mwh - run.baseline.ens_total_mwh);
    for (const auto& r : run.audit.records()) std::printf("  audit: %s\n", r.to_json_line().c_str());
  }

  {
    const auto scenario = building::load_building_scenario("fixtures/building_cold_day.yaml");
    const auto run = building::run_building_case(scenario, config, RunMode::Actuated);
    std::printf("BUILDING cold: discomfort (%d, %d, gated %d) h; energy (%.1f, %.1f) delta %.2f kWh\n",
                run.baseline.discomfort_hours, run.with_override.discomfort_hours,
                run.gated.discomfort_hours, run.baseline.energy_kwh,
                run.with_override.energy_kwh, run.energy_delta_kwh);
    std::printf("BUILDING minT protected: baseline %.3f override %.3f gated %.3f; maxCO2 %.0f\n",
                run.baseline.min_temp_protected_c, run.with_override.min_temp_protected_c,
                run.gated.min_temp_protected_c, run.baseline.max_co2_ppm);
    std::printf("BUILDING audits %zu\n", run.audit.records().size());
    // temperature trace around the evening
    for (int t = 76; t < 96; t += 2) {
      std::printf("  t=%02d:%02d Tb=%.3f To=%.3f Tg=%.3f\n", t / 4, (t % 4) * 15,
                  run.baseline.temp_c[t], run.with_override.temp_c[t], run.gated.temp_c[t]);
    }
    const auto mild = building::load_building_scenario("fixtures/building_mild_day.yaml");
    const auto mrun = building::run_building_case(mild, config, RunMode::Actuated);
    std::printf("BUILDING mild: discomfort (%d, %d) delta %.6f kWh audits %zu\n",
                mrun.baseline.discomfort_hours, mrun.with_override.discomfort_hours,
                mrun.energy_delta_kwh, mrun.audit.records().size());
  }

  {
    const auto scenario = traffic::load_traffic_scenario("fixtures/traffic_case4x4.yaml");
    const auto run = traffic::run_traffic_case(scenario, config, RunMode::Actuated);
    auto dump = [](const char* tag, const traffic::TrafficReport& r) {
      std::printf(
          "TRAFFIC %s: veh mean/med %.1f/%.1f  ped mean/med %.1f/%.1f  hw mean/med/p95 "
          "%.2f/%.2f/%.2f  in/out/net %ld/%ld/%ld peds %ld wait-end %ld buses %d maxred %.0f\n",
          tag, r.veh_delay_mean_s, r.veh_delay_median_s, r.ped_wait_mean_s, r.ped_wait_median_s,
          r.headway_dev_mean_min, r.headway_dev_median_min, r.headway_dev_p95_min,
          r.vehicles_entered, r.vehicles_exited, r.vehicles_in_network, r.peds_served_sensitive,
          r.peds_waiting_end, r.buses_completed, r.max_ped_red_fallback_s);
    };
    dump("base ", run.baseline);
    dump("gated", run.gated);
    std::printf("TRAFFIC engaged at %lld, audits %zu\n",
                static_cast<long long>(run.fallback_engaged_at), run.audit.records().size());
  }
  return 0;
}
