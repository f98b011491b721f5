#pragma once

#include <cmath>
#include <cstdint>

namespace homesense {

// Simulation time in deciseconds since the epoch.
using Tick = std::int64_t;

inline constexpr Tick kTicksPerSecond = 10;
inline constexpr Tick kSecondsPerDay = 86400;
inline constexpr Tick kTicksPerDay = kSecondsPerDay * kTicksPerSecond;
inline constexpr int kDaysPerMonth = 30;
inline constexpr int kDaysPerYear = 360;

inline Tick ticks_from_seconds(double s) { return static_cast<Tick>(std::llround(s * kTicksPerSecond)); }
inline double seconds_from_ticks(Tick t) { return static_cast<double>(t) / kTicksPerSecond; }
inline constexpr Tick ticks_from_days(std::int64_t d) { return d * kTicksPerDay; }

// Smallest multiple of `step` that is >= t (t >= 0).
inline constexpr Tick ceil_to(Tick t, Tick step) { return ((t + step - 1) / step) * step; }

// 0-based column of the per-second matrix containing tick t: column k covers (k, k+1] seconds.
inline constexpr std::int64_t column_of_tick(Tick t) { return t <= 0 ? 0 : (t - 1) / kTicksPerSecond; }

}  // namespace homesense
