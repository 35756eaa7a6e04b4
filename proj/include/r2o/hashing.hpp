#pragma once

#include <cstdint>

namespace r2o {

// splitmix64: stateless, platform-stable mixer used wherever a reproducible
// per-entity draw is needed (turning decisions, arrival phase offsets).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline double unit_draw(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t h = mix64(seed ^ mix64(a ^ mix64(b)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace r2o
