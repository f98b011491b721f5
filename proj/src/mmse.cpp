#include "homesense/mmse.hpp"

#include <algorithm>
#include <stdexcept>

#include "homesense/rng.hpp"

namespace homesense {

double MmseTrajectory::at_month(std::size_t m) const {
  if (monthly_values.empty()) throw std::out_of_range("empty MMSE trajectory");
  return monthly_values[std::min(m, monthly_values.size() - 1)];
}

MmseTrajectory simulate_mmse(std::uint64_t seed, int months, const MmseParams& params) {
  if (months < 1) throw std::invalid_argument("MMSE trajectory needs at least one month");
  if (!(params.m0 >= 0.0 && params.m0 <= 30.0)) throw std::invalid_argument("m0 must lie in [0, 30]");
  if (params.noise_sd < 0.0) throw std::invalid_argument("noise_sd must be non-negative");
  Rng rng = Rng::substream(seed, {stream_key("mmse")});
  MmseTrajectory out;
  out.monthly_values.reserve(months + 1);
  double m = params.m0;
  out.monthly_values.push_back(m);
  for (int t = 0; t < months; ++t) {
    m = std::clamp(m - params.drift + rng.normal(0.0, params.noise_sd), 0.0, 30.0);
    out.monthly_values.push_back(m);
  }
  return out;
}

}  // namespace homesense
