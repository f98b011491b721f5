#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace homesense {

// Stable 64-bit hash of a string key, used to name RNG substreams.
std::uint64_t stream_key(std::string_view name);

// Seeded generator with helpers for the sampling laws used by the simulator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent substream derived from a master seed and a key path.
  static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  std::uint64_t below(std::uint64_t n);      // [0, n)
  double normal(double mean, double sd);
  double exponential(double mean);
  int poisson(double mean);
  bool bernoulli(double p);
  // Normal(mean, sd) conditioned on x > lower.
  double truncated_normal(double mean, double sd, double lower);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace homesense
