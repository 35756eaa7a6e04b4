#include "r2o/sim_traffic.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>

#include "r2o/hashing.hpp"

namespace r2o::traffic {

namespace {

constexpr int kDirs = 4;

struct DirDelta {
  int dr;
  int dc;
};
constexpr std::array<DirDelta, kDirs> kDelta{{{-1, 0}, {0, 1}, {1, 0}, {0, -1}}};  // N E S W

int left_of(int heading) { return (heading + 3) % kDirs; }
int right_of(int heading) { return (heading + 1) % kDirs; }

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

double percentile95(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t idx = static_cast<size_t>(std::ceil(0.95 * values.size())) - 1;
  return values[std::min(idx, values.size() - 1)];
}

}  // namespace

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::NsGreen: return "NS";
    case Phase::EwGreen: return "EW";
    case Phase::PedWalk: return "walk";
  }
  return "?";
}

void TrafficScenario::validate() const {
  if (rows < 1 || cols < 1) throw ScenarioError("grid must be at least 1x1");
  if (corridor_row < 0 || corridor_row >= rows) throw ScenarioError("corridor row outside grid");
  if (horizon_s <= 0) throw ScenarioError("horizon must be positive");
  if (vehicle_entry_rate_ns_vph.empty() || vehicle_entry_rate_ew_vph.empty()) {
    throw ScenarioError("demand series are empty");
  }
  for (double r : vehicle_entry_rate_ns_vph) {
    if (r < 0) throw ScenarioError("negative NS entry rate");
  }
  for (double r : vehicle_entry_rate_ew_vph) {
    if (r < 0) throw ScenarioError("negative EW entry rate");
  }
  if (bus_headway_target_min <= 0) throw ScenarioError("headway target must be positive");
  for (const auto& [r, c] : sensitive_sites) {
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw ScenarioError("sensitive site off-grid");
  }
  if (turn_left + turn_right > 1.0) throw ScenarioError("turning fractions exceed 1");
  if (fixed_ns_green_s + fixed_ew_green_s + tsp_extension_cap_s > 60 + walk_s) {
    // The fixed ring promises a pedestrian red of at most 60 s even with a
    // fully used TSP extension.
    throw ScenarioError("fixed plan violates the 60 s pedestrian red bound");
  }
}

double TrafficScenario::entry_rate_vph(bool ns_heading, SimTime now) const {
  const auto& series = ns_heading ? vehicle_entry_rate_ns_vph : vehicle_entry_rate_ew_vph;
  size_t idx = static_cast<size_t>(now / 900);
  if (idx >= series.size()) idx = series.size() - 1;
  return series[idx];
}

TrafficScenario load_traffic_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario: " + path);
  YAML::Node root = YAML::Load(in);

  TrafficScenario s;
  s.scenario_id = root["scenario_id"].as<std::string>("traffic_case");
  s.seed = root["seed"].as<std::uint64_t>(1);
  s.rows = root["rows"].as<int>(4);
  s.cols = root["cols"].as<int>(4);
  s.horizon_s = root["horizon_s"].as<int>(7200);
  s.sat_flow_veh_s = root["sat_flow_veh_s"].as<double>(s.sat_flow_veh_s);
  s.link_travel_s = root["link_travel_s"].as<int>(s.link_travel_s);
  s.bus_link_travel_s = root["bus_link_travel_s"].as<int>(s.bus_link_travel_s);
  s.min_green_s = root["min_green_s"].as<int>(s.min_green_s);
  s.max_green_s = root["max_green_s"].as<int>(s.max_green_s);
  s.walk_s = root["walk_s"].as<int>(s.walk_s);
  s.ped_pressure_weight = root["ped_pressure_weight"].as<double>(s.ped_pressure_weight);
  s.fixed_ns_green_s = root["fixed_ns_green_s"].as<int>(s.fixed_ns_green_s);
  s.fixed_ew_green_s = root["fixed_ew_green_s"].as<int>(s.fixed_ew_green_s);
  s.tsp_extension_cap_s = root["tsp_extension_cap_s"].as<int>(s.tsp_extension_cap_s);
  s.tsp_detect_horizon_s = root["tsp_detect_horizon_s"].as<int>(s.tsp_detect_horizon_s);
  s.corridor_row = root["corridor_row"].as<int>(s.corridor_row);
  s.bus_headway_target_min = root["bus_headway_target_min"].as<double>(s.bus_headway_target_min);
  s.bus_first_dispatch_s = root["bus_first_dispatch_s"].as<int>(s.bus_first_dispatch_s);
  for (const auto& node : root["sensitive_sites"]) {
    s.sensitive_sites.emplace_back(node["row"].as<int>(), node["col"].as<int>());
  }
  s.vehicle_entry_rate_ns_vph = root["vehicle_entry_rate_ns_vph"].as<std::vector<double>>();
  s.vehicle_entry_rate_ew_vph = root["vehicle_entry_rate_ew_vph"].as<std::vector<double>>();
  s.ped_rate_sensitive_per_h = root["ped_rate_sensitive_per_h"].as<double>(s.ped_rate_sensitive_per_h);
  s.ped_rate_other_per_h = root["ped_rate_other_per_h"].as<double>(s.ped_rate_other_per_h);
  s.turn_left = root["turn_left"].as<double>(s.turn_left);
  s.turn_right = root["turn_right"].as<double>(s.turn_right);
  s.monitor_window_s = root["monitor_window_s"].as<int>(s.monitor_window_s);
  s.monitor_period_s = root["monitor_period_s"].as<int>(s.monitor_period_s);
  s.ped_wait_sla_s = root["ped_wait_sla_s"].as<double>(s.ped_wait_sla_s);
  s.headway_sla_min = root["headway_sla_min"].as<double>(s.headway_sla_min);
  s.validate();
  return s;
}

ControllerKind controller_for_fallback(const std::string& fallback_name) {
  if (fallback_name == "fixed_time_ped_recall") return ControllerKind::FixedPedRecall;
  if (fallback_name == "tsp_enabled") return ControllerKind::AdaptiveTsp;
  throw ValidationError("no pre-validated signal plan for fallback " + fallback_name);
}

Phase select_max_pressure_phase(Phase current, double pressure_ns, double pressure_ew,
                                double ped_pressure) {
  Phase best = current;
  double best_p = current == Phase::NsGreen   ? pressure_ns
                  : current == Phase::EwGreen ? pressure_ew
                                              : ped_pressure;
  if (pressure_ns > best_p) {
    best = Phase::NsGreen;
    best_p = pressure_ns;
  }
  if (pressure_ew > best_p) {
    best = Phase::EwGreen;
    best_p = pressure_ew;
  }
  if (ped_pressure > best_p) {
    best = Phase::PedWalk;
    best_p = ped_pressure;
  }
  return best;
}

namespace {

struct Vehicle {
  SimTime queue_entered = -1;
  double delay_s = 0.0;
};

struct Approach {
  std::deque<long> queue;
  double credit = 0.0;
  bool is_entry = false;
  double entry_acc = 0.0;
};

struct Bus {
  SimTime arrive_at = 0;  // at the stop line of `col`
  int col = 0;
  bool done = false;
  SimTime exited_at = 0;
};

struct Node {
  Phase phase = Phase::NsGreen;
  int elapsed = 0;
  std::array<Approach, kDirs> approaches;
  std::deque<SimTime> ped_waiting;
  double ped_acc = 0.0;
  bool sensitive = false;
  SimTime last_walk_end = 0;
  double green_ns = 0.0;
  double green_ew = 0.0;
};

struct LinkTransit {
  SimTime ready;
  long veh;
  int r, c;
  int heading;
};

class Engine {
 public:
  Engine(const TrafficScenario& s, ControllerKind controller)
      : s_(s),
        controller_(controller),
        nodes_(s.rows * s.cols),
        in_transit_(static_cast<size_t>(s.rows) * s.cols * kDirs, 0) {
    if (controller_ == ControllerKind::FixedPedRecall) fallback_engaged_at_ = 0;
    for (const auto& [r, c] : s_.sensitive_sites) node(r, c).sensitive = true;
    for (int r = 0; r < s_.rows; ++r) {
      node(r, 0).approaches[static_cast<int>(Dir::East)].is_entry = true;
      node(r, s_.cols - 1).approaches[static_cast<int>(Dir::West)].is_entry = true;
    }
    for (int c = 0; c < s_.cols; ++c) {
      node(0, c).approaches[static_cast<int>(Dir::South)].is_entry = true;
      node(s_.rows - 1, c).approaches[static_cast<int>(Dir::North)].is_entry = true;
    }
    // Deterministic per-entry phase offsets.
    for (int r = 0; r < s_.rows; ++r) {
      for (int c = 0; c < s_.cols; ++c) {
        for (int d = 0; d < kDirs; ++d) {
          auto& ap = node(r, c).approaches[d];
          if (ap.is_entry) ap.entry_acc = unit_draw(s_.seed, key(r, c), 100 + d);
        }
        node(r, c).ped_acc = unit_draw(s_.seed, key(r, c), 7);
      }
    }
    const SimTime headway = static_cast<SimTime>(s_.bus_headway_target_min * 60.0);
    for (SimTime t = s_.bus_first_dispatch_s; t + headway <= s_.horizon_s; t += headway) {
      Bus b;
      b.arrive_at = t + s_.bus_link_travel_s;
      buses_.push_back(b);
    }
  }

  void set_controller(ControllerKind kind) {
    if (kind == controller_) return;
    controller_ = kind;
    for (auto& n : nodes_) {
      n.phase = Phase::NsGreen;
      n.elapsed = 0;
    }
    if (kind == ControllerKind::FixedPedRecall && fallback_engaged_at_ < 0) {
      fallback_engaged_at_ = now_;
    }
  }

  ControllerKind controller() const { return controller_; }
  SimTime now() const { return now_; }
  SimTime fallback_engaged_at() const { return fallback_engaged_at_; }

  void step() {
    spawn_vehicles();
    spawn_pedestrians();
    advance_buses();
    decide_phases();
    discharge();
    deliver_transits();
    for (auto& n : nodes_) {
      n.elapsed += 1;
      if (n.phase == Phase::NsGreen) n.green_ns += 1;
      if (n.phase == Phase::EwGreen) n.green_ew += 1;
    }
    now_ += 1;
  }

  // Rolling pool: waits completed in the window plus the elapsed waits of
  // pedestrians still standing at sensitive sites.
  double rolling_median_ped_wait() const {
    std::vector<double> pool;
    for (const auto& [t, w] : recent_sensitive_waits_) {
      if (t >= now_ - s_.monitor_window_s) pool.push_back(w);
    }
    for (const auto& n : nodes_) {
      if (!n.sensitive) continue;
      for (SimTime arr : n.ped_waiting) pool.push_back(static_cast<double>(now_ - arr));
    }
    return median_of(std::move(pool));
  }

  double recent_headway_dev_mean() const {
    if (headway_devs_min_.empty()) return 0.0;
    const size_t n = std::min<size_t>(3, headway_devs_min_.size());
    double sum = 0.0;
    for (size_t i = headway_devs_min_.size() - n; i < headway_devs_min_.size(); ++i) {
      sum += headway_devs_min_[i];
    }
    return sum / n;
  }

  TrafficReport report() const {
    TrafficReport rep;
    rep.veh_delay_mean_s = mean_of(exited_delays_);
    rep.veh_delay_median_s = median_of(exited_delays_);
    rep.ped_wait_mean_s = mean_of(sensitive_waits_);
    rep.ped_wait_median_s = median_of(sensitive_waits_);
    rep.headway_dev_mean_min = mean_of(headway_devs_min_);
    rep.headway_dev_median_min = median_of(headway_devs_min_);
    rep.headway_dev_p95_min = percentile95(headway_devs_min_);
    rep.vehicles_entered = vehicles_entered_;
    rep.vehicles_exited = static_cast<long>(exited_delays_.size());
    long queued = 0;
    for (const auto& n : nodes_) {
      for (const auto& ap : n.approaches) queued += static_cast<long>(ap.queue.size());
    }
    rep.vehicles_in_network = queued + static_cast<long>(transits_.size());
    rep.peds_served_sensitive = static_cast<long>(sensitive_waits_.size());
    long waiting = 0;
    for (const auto& n : nodes_) waiting += static_cast<long>(n.ped_waiting.size());
    rep.peds_waiting_end = waiting;
    int completed = 0;
    for (const auto& b : buses_) {
      if (!b.done) continue;
      completed += 1;
      rep.bus_exit_s.push_back(static_cast<double>(b.exited_at));
    }
    rep.buses_completed = completed;
    rep.max_ped_red_fallback_s = max_ped_red_fallback_s();
    for (int r = 0; r < s_.rows; ++r) {
      for (int c = 0; c < s_.cols; ++c) {
        const std::string k = std::to_string(r) + "," + std::to_string(c);
        rep.phase_green_s[k + ":NS"] = node_const(r, c).green_ns;
        rep.phase_green_s[k + ":EW"] = node_const(r, c).green_ew;
      }
    }
    return rep;
  }

 private:
  std::uint64_t key(int r, int c) const { return static_cast<std::uint64_t>(r) * 97 + c; }
  Node& node(int r, int c) { return nodes_[r * s_.cols + c]; }
  const Node& node_const(int r, int c) const { return nodes_[r * s_.cols + c]; }

  bool in_grid(int r, int c) const { return r >= 0 && r < s_.rows && c >= 0 && c < s_.cols; }

  double max_ped_red_fallback_s() const {
    double max_red = max_ped_red_recorded_;
    if (controller_ == ControllerKind::FixedPedRecall && fallback_engaged_at_ >= 0) {
      for (const auto& n : nodes_) {
        const SimTime since = std::max(n.last_walk_end, fallback_engaged_at_);
        max_red = std::max(max_red, static_cast<double>(now_ - since));
      }
    }
    return max_red;
  }

  void spawn_vehicles() {
    for (int r = 0; r < s_.rows; ++r) {
      for (int c = 0; c < s_.cols; ++c) {
        Node& n = node(r, c);
        for (int d = 0; d < kDirs; ++d) {
          Approach& ap = n.approaches[d];
          if (!ap.is_entry) continue;
          const bool ns = d == static_cast<int>(Dir::North) || d == static_cast<int>(Dir::South);
          ap.entry_acc += s_.entry_rate_vph(ns, now_) / 3600.0;
          while (ap.entry_acc >= 1.0) {
            ap.entry_acc -= 1.0;
            const long id = static_cast<long>(vehicles_.size());
            vehicles_.push_back({now_, 0.0});
            ap.queue.push_back(id);
            ++vehicles_entered_;
          }
        }
      }
    }
  }

  void spawn_pedestrians() {
    for (int r = 0; r < s_.rows; ++r) {
      for (int c = 0; c < s_.cols; ++c) {
        Node& n = node(r, c);
        const double rate = n.sensitive ? s_.ped_rate_sensitive_per_h : s_.ped_rate_other_per_h;
        n.ped_acc += rate / 3600.0;
        while (n.ped_acc >= 1.0) {
          n.ped_acc -= 1.0;
          if (n.phase == Phase::PedWalk) {
            record_ped_wait(n, 0.0);
          } else {
            n.ped_waiting.push_back(now_);
          }
        }
      }
    }
  }

  void record_ped_wait(Node& n, double wait) {
    if (n.sensitive) {
      sensitive_waits_.push_back(wait);
      recent_sensitive_waits_.emplace_back(now_, wait);
      while (!recent_sensitive_waits_.empty() &&
             recent_sensitive_waits_.front().first < now_ - s_.monitor_window_s) {
        recent_sensitive_waits_.pop_front();
      }
    }
  }

  void advance_buses() {
    for (Bus& b : buses_) {
      if (b.done || b.arrive_at > now_) continue;
      Node& n = node(s_.corridor_row, b.col);
      if (n.phase != Phase::EwGreen) continue;  // waits in the transit lane
      if (b.col == s_.cols - 1) {
        b.done = true;
        b.exited_at = now_ + s_.bus_link_travel_s;
        if (last_bus_exit_ >= 0) {
          const double headway = static_cast<double>(b.exited_at - last_bus_exit_);
          headway_devs_min_.push_back(
              std::abs(headway - s_.bus_headway_target_min * 60.0) / 60.0);
        }
        last_bus_exit_ = b.exited_at;
      } else {
        b.col += 1;
        b.arrive_at = now_ + s_.bus_link_travel_s;
      }
    }
  }

  bool bus_demand_at(int r, int c, bool& approaching) const {
    approaching = false;
    if (r != s_.corridor_row) return false;
    bool waiting = false;
    for (const auto& b : buses_) {
      if (b.done || b.col != c) continue;
      if (b.arrive_at <= now_) waiting = true;
      if (b.arrive_at > now_ && b.arrive_at <= now_ + s_.tsp_detect_horizon_s) approaching = true;
    }
    return waiting;
  }

  // Upstream mass counts the stop-line queue plus vehicles already on the
  // incoming link (they must be served here regardless); downstream counts
  // only vehicles standing at the next stop line, as a spillback proxy.
  double queue_pressure(int r, int c, int d) const {
    const Node& n = node_const(r, c);
    const double up = static_cast<double>(n.approaches[d].queue.size()) +
                      static_cast<double>(in_transit_[(r * s_.cols + c) * kDirs + d]);
    const int nr = r + kDelta[d].dr;
    const int nc = c + kDelta[d].dc;
    const double down =
        in_grid(nr, nc) ? static_cast<double>(node_const(nr, nc).approaches[d].queue.size())
                        : 0.0;
    return up - down;
  }

  double upstream_mass(int r, int c, int d) const {
    const Node& n = node_const(r, c);
    return static_cast<double>(n.approaches[d].queue.size()) +
           static_cast<double>(in_transit_[(r * s_.cols + c) * kDirs + d]);
  }

  void switch_phase(Node& n, Phase next) {
    if (n.phase == Phase::PedWalk && next != Phase::PedWalk) n.last_walk_end = now_;
    if (next == Phase::PedWalk && n.phase != Phase::PedWalk) {
      const SimTime red_start = n.last_walk_end;
      const double red = static_cast<double>(now_ - red_start);
      if (controller_ == ControllerKind::FixedPedRecall && fallback_engaged_at_ >= 0 &&
          red_start >= fallback_engaged_at_) {
        max_ped_red_recorded_ = std::max(max_ped_red_recorded_, red);
      }
      while (!n.ped_waiting.empty()) {
        record_ped_wait(n, static_cast<double>(now_ - n.ped_waiting.front()));
        n.ped_waiting.pop_front();
      }
    }
    n.phase = next;
    n.elapsed = 0;
  }

  void decide_adaptive(int r, int c, bool with_tsp) {
    Node& n = node(r, c);
    if (n.phase == Phase::PedWalk) {
      if (n.elapsed < s_.walk_s) return;
      const double pns = queue_pressure(r, c, 0) + queue_pressure(r, c, 2);
      const double pew = queue_pressure(r, c, 1) + queue_pressure(r, c, 3);
      switch_phase(n, pns >= pew ? Phase::NsGreen : Phase::EwGreen);
      return;
    }
    if (n.elapsed < s_.min_green_s) return;

    bool approaching = false;
    const bool bus_waiting = with_tsp && bus_demand_at(r, c, approaching);
    if (with_tsp) {
      if (bus_waiting && n.phase != Phase::EwGreen) {
        switch_phase(n, Phase::EwGreen);
        return;
      }
      // Hold an ending green briefly for an approaching bus.
      if (n.phase == Phase::EwGreen && (approaching || bus_waiting) &&
          n.elapsed < s_.max_green_s + s_.tsp_extension_cap_s) {
        return;
      }
    }

    const double pns = queue_pressure(r, c, 0) + queue_pressure(r, c, 2);
    const double pew = queue_pressure(r, c, 1) + queue_pressure(r, c, 3);
    const double pped = s_.ped_pressure_weight * static_cast<double>(n.ped_waiting.size());
    Phase chosen = select_max_pressure_phase(n.phase, pns, pew, pped);

    if (n.elapsed >= s_.max_green_s && chosen == n.phase && n.phase != Phase::PedWalk) {
      // Anti-hogging: hand the green to the cross street once it has any
      // waiting vehicles, even if pressure still favors the current phase.
      const bool ns = n.phase == Phase::NsGreen;
      const double other_mass = ns ? upstream_mass(r, c, 1) + upstream_mass(r, c, 3)
                                   : upstream_mass(r, c, 0) + upstream_mass(r, c, 2);
      if (other_mass > 0.0) chosen = ns ? Phase::EwGreen : Phase::NsGreen;
    }
    if (chosen != n.phase) switch_phase(n, chosen);
  }

  void decide_fixed(int r, int c) {
    Node& n = node(r, c);
    const bool corridor = r == s_.corridor_row;
    bool approaching = false;
    const bool bus_waiting = corridor && bus_demand_at(r, c, approaching);

    switch (n.phase) {
      case Phase::NsGreen:
        // Early green for a waiting bus truncates NS to its minimum.
        if (bus_waiting && n.elapsed >= s_.min_green_s) {
          switch_phase(n, Phase::EwGreen);
        } else if (n.elapsed >= s_.fixed_ns_green_s) {
          switch_phase(n, Phase::EwGreen);
        }
        break;
      case Phase::EwGreen:
        if (n.elapsed >= s_.fixed_ew_green_s) {
          const bool extend = corridor && (bus_waiting || approaching) &&
                              n.elapsed < s_.fixed_ew_green_s + s_.tsp_extension_cap_s;
          if (!extend) switch_phase(n, Phase::PedWalk);
        }
        break;
      case Phase::PedWalk:
        if (n.elapsed >= s_.walk_s) switch_phase(n, Phase::NsGreen);
        break;
    }
  }

  void decide_phases() {
    for (int r = 0; r < s_.rows; ++r) {
      for (int c = 0; c < s_.cols; ++c) {
        switch (controller_) {
          case ControllerKind::Adaptive: decide_adaptive(r, c, false); break;
          case ControllerKind::AdaptiveTsp: decide_adaptive(r, c, r == s_.corridor_row); break;
          case ControllerKind::FixedPedRecall: decide_fixed(r, c); break;
        }
      }
    }
  }

  void discharge() {
    for (int r = 0; r < s_.rows; ++r) {
      for (int c = 0; c < s_.cols; ++c) {
        Node& n = node(r, c);
        if (n.phase == Phase::PedWalk) continue;
        const std::array<int, 2> served = n.phase == Phase::NsGreen
                                              ? std::array<int, 2>{0, 2}
                                              : std::array<int, 2>{1, 3};
        for (int d : served) {
          Approach& ap = n.approaches[d];
          ap.credit += s_.sat_flow_veh_s;
          if (ap.queue.empty()) {
            ap.credit = std::min(ap.credit, 1.0);
            continue;
          }
          while (ap.credit >= 1.0 && !ap.queue.empty()) {
            ap.credit -= 1.0;
            const long id = ap.queue.front();
            ap.queue.pop_front();
            Vehicle& veh = vehicles_[id];
            veh.delay_s += static_cast<double>(now_ - veh.queue_entered);

            const double u = unit_draw(s_.seed, static_cast<std::uint64_t>(id), key(r, c));
            int heading = d;
            if (u < s_.turn_left) heading = left_of(d);
            else if (u < s_.turn_left + s_.turn_right) heading = right_of(d);

            const int nr = r + kDelta[heading].dr;
            const int nc = c + kDelta[heading].dc;
            if (!in_grid(nr, nc)) {
              exited_delays_.push_back(veh.delay_s);
            } else {
              transits_.push_back({now_ + s_.link_travel_s, id, nr, nc, heading});
              in_transit_[(nr * s_.cols + nc) * kDirs + heading] += 1;
            }
          }
        }
      }
    }
  }

  void deliver_transits() {
    while (!transits_.empty() && transits_.front().ready <= now_) {
      const LinkTransit t = transits_.front();
      transits_.pop_front();
      vehicles_[t.veh].queue_entered = now_;
      node(t.r, t.c).approaches[t.heading].queue.push_back(t.veh);
      in_transit_[(t.r * s_.cols + t.c) * kDirs + t.heading] -= 1;
    }
  }

  const TrafficScenario& s_;
  ControllerKind controller_;
  std::vector<Node> nodes_;
  std::vector<Vehicle> vehicles_;
  std::deque<LinkTransit> transits_;  // constant travel time keeps this FIFO
  std::vector<Bus> buses_;
  std::vector<int> in_transit_;  // per (node, heading), vehicles on the link
  SimTime now_ = 0;
  long vehicles_entered_ = 0;
  std::vector<double> exited_delays_;
  std::vector<double> sensitive_waits_;
  std::deque<std::pair<SimTime, double>> recent_sensitive_waits_;
  std::vector<double> headway_devs_min_;
  SimTime last_bus_exit_ = -1;
  SimTime fallback_engaged_at_ = -1;
  double max_ped_red_recorded_ = 0.0;
};

}  // namespace

TrafficReport run_uncontrolled(const TrafficScenario& scenario, ControllerKind controller) {
  scenario.validate();
  Engine engine(scenario, controller);
  for (SimTime t = 0; t < scenario.horizon_s; ++t) engine.step();
  return engine.report();
}

TrafficCaseResult run_traffic_case(const TrafficScenario& scenario,
                                   const GovernanceConfig& config, RunMode mode) {
  scenario.validate();
  const auto config_violations = validate_cross_references(config, Domain::Transport);
  if (!config_violations.empty()) {
    throw ValidationError("config fails cross-validation: " + config_violations.front().path);
  }

  TrafficCaseResult result;

  {
    Engine baseline(scenario, ControllerKind::Adaptive);
    for (SimTime t = 0; t < scenario.horizon_s; ++t) baseline.step();
    result.baseline = baseline.report();
  }

  result.trace.scenario_id = scenario.scenario_id;
  result.trace.mode = mode;
  OverrideGate gate(config, Domain::Transport, mode, scenario.scenario_id,
                    {"max_pressure_adaptive", "v1"}, &result.audit);

  Engine engine(scenario, ControllerKind::Adaptive);
  for (SimTime t = 0; t < scenario.horizon_s; ++t) {
    if (t % scenario.monitor_period_s == 0) {
      MonitorVector m;
      m.step = t / scenario.monitor_period_s;
      const double median_wait = engine.rolling_median_ped_wait();
      const double dev = engine.recent_headway_dev_mean();
      m.quality["ped_wait_sensitive"] =
          median_wait <= 0.0 ? 1.0 : std::min(1.0, scenario.ped_wait_sla_s / median_wait);
      m.quality["bus_headway"] =
          dev <= 0.0 ? 1.0 : std::min(1.0, scenario.headway_sla_min / dev);

      const GateDecision decision = gate.step(m, t);

      if (decision.action_source == ActionSource::Fallback) {
        engine.set_controller(controller_for_fallback(decision.fallback_name));
      } else if (engine.controller() != ControllerKind::Adaptive) {
        engine.set_controller(ControllerKind::Adaptive);  // override expired
      }

      StepTrace row;
      row.t = t;
      row.source = decision.action_source;
      row.would_be_fallback = mode == RunMode::Shadow && decision.override_state.active;
      if (decision.override_state.active) {
        row.level = to_string(decision.override_state.level);
        row.fallback = decision.override_state.fallback_name;
      }
      row.audit_id = decision.audit_id;
      result.trace.steps.push_back(std::move(row));
      result.trace.monitors.push_back(std::move(m));
    }
    engine.step();
  }
  gate.finalize(scenario.horizon_s);
  result.gated = engine.report();
  result.fallback_engaged_at = engine.fallback_engaged_at();
  return result;
}

}  // namespace r2o::traffic
