#pragma once

// Shared generators and independent brute-force oracles for the test suites.
// Oracles here must not reuse the solver paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "ppt/config.hpp"
#include "ppt/ground.hpp"
#include "ppt/measures.hpp"
#include "ppt/rng.hpp"

namespace ppt_test {

using namespace ppt;

// random probability vector with entries bounded away from zero
inline DiscreteMeasure random_probability(int k, RngStream& rng, double floor = 0.0) {
  Vec w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& x : w) {
    x = floor - std::log(1.0 - rng.uniform01());
    total += x;
  }
  for (auto& x : w) x /= total;
  // exact renormalization for the 1e-12 construction gate
  double s = 0.0;
  for (double x : w) s += x;
  w.back() += 1.0 - s;
  return DiscreteMeasure::probability(std::move(w));
}

// random finite metric space: random symmetric entries closed under min-plus
inline GroundSpace random_metric_space(int k, RngStream& rng) {
  Mat d(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(k), 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) d[i][j] = d[j][i] = 0.1 + 1.9 * rng.uniform01();
  for (int l = 0; l < k; ++l)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) d[i][j] = std::min(d[i][j], d[i][l] + d[l][j]);
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) labels.push_back("z" + std::to_string(i));
  return GroundSpace::finite(std::move(labels), std::move(d));
}

inline Configuration random_configuration(int k, int mass, RngStream& rng) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < mass; ++i) ++counts[static_cast<std::size_t>(rng.next_u64() % k)];
  return Configuration::from_counts(std::move(counts));
}

// brute-force assignment minimum over all permutations of the expansions
inline double brute_force_assignment(const Mat& cost) {
  const std::size_t n = cost.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = ppt::kInf;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][static_cast<std::size_t>(perm[i])];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// numerical Legendre transform sup_{u in [0,1)} { u s - alpha1(u) } on a grid
inline double legendre_alpha1_grid(double s, double step = 1e-5) {
  double best = 0.0;
  for (double u = 0.0; u < 1.0 - step; u += step) {
    double v = u * s - ppt::alpha_t(1.0, u);
    best = std::max(best, v);
  }
  return best;
}

// three-point convexity test on a grid
inline bool three_point_convex(const std::function<double(double)>& f, double lo, double hi,
                               int n = 200, double tol = 1e-9) {
  double h = (hi - lo) / n;
  for (int i = 1; i + 1 <= n; ++i) {
    double a = f(lo + (i - 1) * h), b = f(lo + i * h), c = f(lo + (i + 1) * h);
    if (a + c - 2 * b < -tol) return false;
  }
  return true;
}

}  // namespace ppt_test
