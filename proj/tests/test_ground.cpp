#include "doctest.h"

#include <cmath>

#include "ppt/ground.hpp"
#include "test_support.hpp"

using namespace ppt;

TEST_CASE("alpha_t values") {
  CHECK(alpha_t(0.3, 0.0) == doctest::Approx(0.0));
  // limit formula at t = 1
  CHECK(alpha_t(1.0, 0.5) == doctest::Approx(-0.5 + std::log(2.0)).epsilon(1e-12));
  // direct evaluation at t = 1/2, and the u^2/2 sandwich
  CHECK(alpha_t(0.5, 0.5) == doctest::Approx(0.1698990367953976).epsilon(1e-12));
  CHECK(alpha_t(0.5, 0.5) >= 0.125);
  // boundary values
  CHECK(alpha_t(0.5, 1.0) == doctest::Approx(-std::log(0.5) / 0.5));
  CHECK(std::isinf(alpha_t(1.0, 1.0)));
  CHECK_THROWS_AS(alpha_t(0.5, -0.1), InputError);
  CHECK_THROWS_AS(alpha_t(1.2, 0.5), InputError);
}

TEST_CASE("dembo sandwich alpha_t >= alpha_0 >= u^2/2") {
  for (int ti = 0; ti <= 10; ++ti) {
    double t = ti / 10.0;
    for (int ui = 0; ui < 100; ++ui) {
      double u = ui / 100.0;
      double at = alpha_t(t, u);
      double a0 = alpha_t(0.0, u);
      CHECK(at >= a0 - 1e-12);
      CHECK(a0 >= u * u / 2.0 - 1e-12);
    }
  }
}

TEST_CASE("alpha1_conjugate closed form and Legendre grid oracle") {
  CHECK(alpha1_conjugate(0.0) == doctest::Approx(0.0));
  CHECK(alpha1_conjugate(1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
  CHECK(alpha1_conjugate(2.0) == doctest::Approx(0.9013877113318902).epsilon(1e-9));
  CHECK_THROWS_AS(alpha1_conjugate(-1.0), InputError);
  for (int i = 0; i <= 40; ++i) {
    double s = 0.25 * i;
    double grid = ppt_test::legendre_alpha1_grid(s);
    CHECK(std::abs(alpha1_conjugate(s) - grid) < 1e-4);
  }
}

TEST_CASE("phi families") {
  CHECK(phi_lambda(0.5, 0.0) == doctest::Approx(0.0));
  CHECK(phi_lambda(0.0, 3.25) == doctest::Approx(3.25));
  CHECK(phi_wu(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  double p05_10 = phi_lambda(0.5, 10.0);
  CHECK(p05_10 == doctest::Approx(20.0 - std::log(21.0)).epsilon(1e-12));
  CHECK(p05_10 > phi_wu(10.0));
  CHECK(phi_wu(10.0) == doctest::Approx(9.0000453999297625).epsilon(1e-12));
  // three-point convexity on a grid
  CHECK(ppt_test::three_point_convex([](double s) { return phi_lambda(0.5, s); }, 0.0, 10.0));
  CHECK(ppt_test::three_point_convex([](double s) { return phi_wu(s); }, 0.0, 10.0));
  CHECK_THROWS_AS(phi_lambda(1.0, 1.0), InputError);
  CHECK_THROWS_AS(phi_lambda(0.5, -1.0), InputError);
}

TEST_CASE("alpha family validation") {
  CHECK_NOTHROW(AlphaFamily::dembo(0.0));
  CHECK_NOTHROW(AlphaFamily::dembo(1.0));
  CHECK_NOTHROW(AlphaFamily::square());
  // convex piecewise-linear samples pass, a concave bump fails
  CHECK_NOTHROW(AlphaFamily::custom_convex({0.0, 0.5, 1.0}, {0.0, 0.2, 0.9}));
  CHECK_THROWS_AS(AlphaFamily::custom_convex({0.0, 0.5, 1.0}, {0.0, 0.8, 0.9}), InputError);
  AlphaFamily c = AlphaFamily::custom_convex({0.0, 0.5, 1.0}, {0.0, 0.2, 0.9});
  CHECK(c(0.25) == doctest::Approx(0.1));
  CHECK(c(0.75) == doctest::Approx(0.55));
}

TEST_CASE("finite metric constructor validation") {
  Mat good = {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
  CHECK_NOTHROW(GroundSpace::finite({"a", "b", "c"}, good));
  // triangle violation: d(a,c) > d(a,b) + d(b,c)
  Mat bad = {{0, 1, 3.5}, {1, 0, 1}, {3.5, 1, 0}};
  CHECK_THROWS_AS(GroundSpace::finite({"a", "b", "c"}, bad), InputError);
  Mat asym = {{0, 1}, {2, 0}};
  CHECK_THROWS_AS(GroundSpace::finite({"a", "b"}, asym), InputError);
  Mat diag = {{0.5, 1}, {1, 0}};
  CHECK_THROWS_AS(GroundSpace::finite({"a", "b"}, diag), InputError);
}

TEST_CASE("cost functions") {
  auto space = ppt_test::random_metric_space(4, *[] {
    static RngStream rng(7, 0);
    return &rng;
  }());
  auto ham = CostFunction::hamming();
  CHECK(ham.on_indices(space, 1, 1) == 0.0);
  CHECK(ham.on_indices(space, 1, 2) == 1.0);
  auto d2 = CostFunction::squared_distance();
  CHECK(d2.on_indices(space, 0, 2) ==
        doctest::Approx(space.metric(0, 2) * space.metric(0, 2)));
  CHECK(d2.on_points({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(25.0));
  CHECK(CostFunction::distance_power(1.0).on_points({0.0}, {2.5}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(CostFunction::custom({{0.0, -1.0}, {1.0, 0.0}}), InputError);
}

TEST_CASE("finite spaces load from json") {
  nlohmann::json good = {{"labels", {"a", "b"}}, {"metric", {{0.0, 1.0}, {1.0, 0.0}}}};
  auto space = GroundSpace::from_json(good);
  CHECK(space.size() == 2);
  CHECK(space.metric(0, 1) == doctest::Approx(1.0));
  nlohmann::json missing = {{"labels", {"a", "b"}}};
  CHECK_THROWS_AS(GroundSpace::from_json(missing), InputError);
  nlohmann::json bad = {{"labels", {"a", "b"}}, {"metric", {{0.0, 1.0}, {2.0, 0.0}}}};
  CHECK_THROWS_AS(GroundSpace::from_json(bad), InputError);
}
