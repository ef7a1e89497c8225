#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ppt/numeric.hpp"

namespace ppt {

// Deterministic random stream derived from (master seed, stream index).
// Streams with distinct indices are independent for practical purposes, so
// per-draw work can be parallelized without changing results.
//
// All distributions are implemented on top of the (fully specified)
// mt19937_64 engine; none of the implementation-defined standard library
// distributions are used, so output is identical across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0) {
    std::uint64_t s = splitmix(master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1));
    engine_.seed(splitmix(s));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller (pair cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Poisson by inversion; large means split using Poisson additivity.
  int poisson(double lambda) {
    if (lambda < 0.0) throw InputError("poisson: negative mean");
    if (lambda == 0.0) return 0;
    if (lambda > 30.0) return poisson(lambda / 2.0) + poisson(lambda - lambda / 2.0);
    double u = uniform01();
    double p = std::exp(-lambda), cum = p;
    int k = 0;
    int cap = static_cast<int>(lambda + 40.0 * std::sqrt(lambda) + 100.0);
    while (u > cum && k < cap) {
      ++k;
      p *= lambda / k;
      cum += p;
    }
    return k;
  }

  int binomial(int n, double p) {
    if (p < 0.0 || p > 1.0) throw InputError("binomial: p outside [0,1]");
    int k = 0;
    for (int i = 0; i < n; ++i)
      if (uniform01() < p) ++k;
    return k;
  }

  // Index draw from (unnormalized) nonnegative weights by CDF inversion.
  int categorical(const Vec& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw InputError("categorical: zero total weight");
    double u = uniform01() * total, cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace ppt
