#include "doctest.h"

#include <cmath>

#include "ppt/concentration.hpp"
#include "test_support.hpp"

using namespace ppt;
using namespace ppt_test;

namespace {

TargetSet mass_sublevel_set(const ConfigurationSpaceIndex& idx, int level) {
  TargetSet A;
  for (int i = 0; i < idx.size(); ++i)
    if (idx.config(i).total_mass() <= level) A.members.push_back(idx.config(i));
  return A;
}

TargetSet random_target(const ConfigurationSpaceIndex& idx, int size, RngStream& rng) {
  TargetSet A;
  while (static_cast<int>(A.members.size()) < size) {
    int i = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(idx.size()));
    bool seen = false;
    for (auto& m : A.members) seen = seen || m == idx.config(i);
    if (!seen) A.members.push_back(idx.config(i));
  }
  return A;
}

// brute-force simplex grid oracle for c_A with |A| = 3
double cA_grid_oracle(const Configuration& xi, const TargetSet& A, const AlphaFamily& alpha) {
  auto value_at = [&](double w0, double w1, double w2) {
    double total = 0.0;
    for (int x = 0; x < xi.ground_size(); ++x) {
      int cx = xi.count(x);
      if (cx == 0) continue;
      double u = 0.0;
      const double w[3] = {w0, w1, w2};
      for (int m = 0; m < 3; ++m)
        u += w[m] * positive_part(1.0 - static_cast<double>(A.members[static_cast<std::size_t>(m)].count(x)) / cx);
      total += cx * alpha(u);
    }
    return total;
  };
  double best = kInf, b0 = 0, b1 = 0;
  for (double w0 = 0.0; w0 <= 1.0 + 1e-12; w0 += 1e-2)
    for (double w1 = 0.0; w1 <= 1.0 - w0 + 1e-12; w1 += 1e-2) {
      double v = value_at(w0, w1, 1.0 - w0 - w1);
      if (v < best) {
        best = v;
        b0 = w0;
        b1 = w1;
      }
    }
  for (double w0 = std::max(0.0, b0 - 2e-2); w0 <= std::min(1.0, b0 + 2e-2); w0 += 1e-3)
    for (double w1 = std::max(0.0, b1 - 2e-2); w1 <= std::min(1.0 - w0, b1 + 2e-2); w1 += 1e-3)
      best = std::min(best, value_at(w0, w1, 1.0 - w0 - w1));
  return best;
}

}  // namespace

TEST_CASE("convex distance basics") {
  auto half = AlphaFamily::half_square();
  // xi in A gives zero with the point mass at xi
  auto xi = Configuration::from_counts({2, 0});
  TargetSet A{{xi, Configuration::from_counts({1, 1})}};
  auto r = convex_distance_cA(xi, A, half);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.weights[0] == doctest::Approx(1.0));

  // forced weights on a singleton: 2 * (1/2) (1/2)^2 = 0.25
  TargetSet single{{Configuration::from_counts({1, 1})}};
  auto r2 = convex_distance_cA(xi, single, half);
  CHECK(r2.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(convex_distance_dA(xi, single) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("cA matches the simplex grid oracle on |A| = 3 instances") {
  RngStream rng(91, 0);
  auto idx = make_index(2, 3);
  auto half = AlphaFamily::half_square();
  for (int s = 0; s < 12; ++s) {
    auto xi = random_configuration(2, 1 + static_cast<int>(rng.next_u64() % 3), rng);
    auto A = random_target(*idx, 3, rng);
    double solver = convex_distance_cA(xi, A, half, 1e-9).value;
    double grid = cA_grid_oracle(xi, A, half);
    CHECK(std::abs(solver - grid) < 1e-3);
  }
}

TEST_CASE("convex distance identity c_A = d_A^2 / 2") {
  RngStream rng(92, 0);
  auto idx = make_index(2, 3);
  for (int s = 0; s < 40; ++s) {
    auto xi = random_configuration(2, 1 + static_cast<int>(rng.next_u64() % 3), rng);
    int size = 1 + static_cast<int>(rng.next_u64() % 5);
    auto A = random_target(*idx, size, rng);
    double ca = convex_distance_cA(xi, A, AlphaFamily::half_square(), 1e-10).value;
    double da = d_A_supinf(xi, A);
    double scale = std::max({2.0 * ca, da * da, 1e-6});
    CHECK(std::abs(2.0 * ca - da * da) <= 2e-3 * scale);
    CHECK_NOTHROW(convex_distance_dA(xi, A));
  }
}

TEST_CASE("cA vanishes exactly on members and is monotone in A") {
  RngStream rng(93, 0);
  auto idx = make_index(2, 3);
  auto half = AlphaFamily::half_square();
  for (int i = 0; i < idx->size(); ++i) {
    auto A = mass_sublevel_set(*idx, 1);
    double v = convex_distance_cA(idx->config(i), A, half, 1e-10).value;
    bool in_A = idx->config(i).total_mass() <= 1;
    if (in_A)
      CHECK(v == doctest::Approx(0.0));
    else
      CHECK(v > 1e-6);
  }
  // A subset A' implies c_{A'} <= c_A
  for (int s = 0; s < 10; ++s) {
    auto A = random_target(*idx, 2, rng);
    TargetSet bigger = A;
    auto extra = random_target(*idx, 2, rng);
    for (auto& m : extra.members) {
      bool seen = false;
      for (auto& e : bigger.members) seen = seen || e == m;
      if (!seen) bigger.members.push_back(m);
    }
    for (int i = 0; i < idx->size(); ++i) {
      double small = convex_distance_cA(idx->config(i), A, half, 1e-10).value;
      double big = convex_distance_cA(idx->config(i), bigger, half, 1e-10).value;
      CHECK(big <= small + 1e-8);
    }
  }
}

TEST_CASE("two-set concentration bounds on a truncated poisson law") {
  auto idx = make_index(2, 4);
  auto law = poisson_law(DiscreteMeasure::weights({0.5, 0.5}), idx);
  auto A = mass_sublevel_set(*idx, 1);
  auto rep = two_set_experiment(law, A, 0.5, {0.25, 0.5, 1.0, 2.0});
  CHECK_FALSE(rep.any_violation);
  for (auto& row : rep.product_bound) {
    CHECK(row.lhs <= row.bound + 1e-9);
    CHECK(row.p_A > 0.5);
  }
  for (auto& row : rep.distance_bound) CHECK(row.lhs <= row.bound + 1e-9);

  // r = 0: the bound degrades to lhs <= 1 and A is inside its enlargement
  auto rep0 = two_set_experiment(law, A, 0.5, {0.0});
  CHECK_FALSE(rep0.any_violation);
  CHECK(rep0.product_bound[0].bound == doctest::Approx(1.0));
}

TEST_CASE("pair-count deviation experiment") {
  PairDeviationConfig cfg;
  cfg.n_samples = 1500;
  cfg.seed = 77;
  auto rep = pair_deviation_experiment(cfg);
  CHECK(rep.hypothesis_ok);
  CHECK_FALSE(rep.any_violation);
  CHECK(rep.median >= 0.0);
  CHECK(rep.median_ci_low <= rep.median);
  CHECK(rep.median_ci_high >= rep.median);
  for (auto& row : rep.rows) {
    CHECK(row.upper_emp_lcl <= row.upper_bound + 1e-12);
    CHECK(row.lower_emp_lcl <= row.lower_bound + 1e-12);
  }

  // the experiment is reproducible bit for bit
  auto rep2 = pair_deviation_experiment(cfg);
  CHECK(rep2.median == rep.median);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep2.rows[i].upper_emp == rep.rows[i].upper_emp);
    CHECK(rep2.rows[i].lower_emp == rep.rows[i].lower_emp);
  }

  // degenerate kernel: no pairs ever, everything collapses to zero
  PairDeviationConfig zero = cfg;
  zero.radius = 0.0;
  zero.n_samples = 200;
  auto rep0 = pair_deviation_experiment(zero);
  CHECK(rep0.hypothesis_ok);
  CHECK(rep0.median == doctest::Approx(0.0));
  CHECK_FALSE(rep0.any_violation);
}
