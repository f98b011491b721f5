#pragma once

#include <cstdint>
#include <vector>

namespace homesense {

struct MmseParams {
  double m0 = 29.0;
  double drift = 9.5 / 108.0;  // decline per month
  double noise_sd = 0.1;
};

struct MmseTrajectory {
  std::vector<double> monthly_values;

  double at_month(std::size_t m) const;
};

// M_0 = m0, M_{t+1} = clip(M_t - drift + eps_t, 0, 30) with eps_t ~ N(0, noise_sd^2).
MmseTrajectory simulate_mmse(std::uint64_t seed, int months, const MmseParams& params = {});

}  // namespace homesense
