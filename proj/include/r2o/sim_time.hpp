#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace r2o {

// Simulation clock: whole seconds since scenario start (midnight of day 0).
// All runtime artifacts are stamped with this clock, never the wall clock,
// so repeated runs produce identical bytes.
using SimTime = std::int64_t;
using SimDuration = std::chrono::seconds;

constexpr SimTime kSecondsPerMinute = 60;
constexpr SimTime kSecondsPerHour = 3600;
constexpr SimTime kSecondsPerDay = 86400;

inline constexpr SimTime hours(double h) { return static_cast<SimTime>(h * kSecondsPerHour); }
inline constexpr SimTime minutes(double m) { return static_cast<SimTime>(m * kSecondsPerMinute); }

// "6:15:00" style stamp with a day prefix once the clock passes 24 h,
// e.g. "2d 03:00:00". Used in audit records and notices.
std::string format_sim_time(SimTime t);

}  // namespace r2o
