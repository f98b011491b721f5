#include "homesense/rng.hpp"

#include <algorithm>
#include <cmath>

namespace homesense {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_key(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

std::uint64_t Rng::below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

double Rng::normal(double mean, double sd) {
  if (sd <= 0.0) return mean;
  return std::normal_distribution<double>(mean, sd)(engine_);
}

double Rng::exponential(double mean) { return std::exponential_distribution<double>(1.0 / mean)(engine_); }

int Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<int>(mean)(engine_);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::truncated_normal(double mean, double sd, double lower) {
  if (sd <= 0.0) return std::max(mean, std::nextafter(lower, INFINITY));
  double a = (lower - mean) / sd;
  if (a < 0.5) {
    for (;;) {
      double z = std::normal_distribution<double>(0.0, 1.0)(engine_);
      if (z > a) return mean + sd * z;
    }
  }
  // Exponential rejection sampler for the far tail (Robert 1995).
  double alpha = (a + std::sqrt(a * a + 4.0)) / 2.0;
  for (;;) {
    double z = a + std::exponential_distribution<double>(alpha)(engine_);
    double rho = std::exp(-(z - alpha) * (z - alpha) / 2.0);
    if (uniform() <= rho) return mean + sd * z;
  }
}

}  // namespace homesense
