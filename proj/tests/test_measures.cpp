#include "doctest.h"

#include <cmath>

#include "ppt/measures.hpp"
#include "test_support.hpp"

using namespace ppt;

TEST_CASE("relative entropy examples") {
  auto nu = DiscreteMeasure::probability({0.3, 0.7});
  CHECK(relative_entropy(nu, nu) == doctest::Approx(0.0));
  auto d0 = DiscreteMeasure::dirac(0, 4);
  auto u4 = DiscreteMeasure::uniform(4);
  CHECK(relative_entropy(d0, u4) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  auto u2 = DiscreteMeasure::uniform(2);
  auto d0_2 = DiscreteMeasure::dirac(0, 2);
  CHECK(std::isinf(relative_entropy(u2, d0_2)));
  CHECK_THROWS_AS(relative_entropy(DiscreteMeasure::weights({1.0, 2.0}), u2), InputError);
}

TEST_CASE("tv distance examples") {
  auto nu = DiscreteMeasure::probability({0.3, 0.7});
  CHECK(tv_distance(nu, nu) == doctest::Approx(0.0));
  CHECK(tv_distance(DiscreteMeasure::dirac(0, 2), DiscreteMeasure::dirac(1, 2)) ==
        doctest::Approx(1.0));
  auto a = DiscreteMeasure::probability({0.75, 0.25});
  auto b = DiscreteMeasure::probability({0.25, 0.75});
  CHECK(tv_distance(a, b) == doctest::Approx(0.5));
}

TEST_CASE("entropy nonnegativity and identity of indiscernibles on random pairs") {
  RngStream rng(11, 0);
  for (int s = 0; s < 200; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 5);
    auto nu1 = ppt_test::random_probability(k, rng);
    auto nu2 = ppt_test::random_probability(k, rng);
    double h = relative_entropy(nu1, nu2);
    CHECK(h >= 0.0);
    if (h < 1e-13) {
      CHECK(tv_distance(nu1, nu2) < 1e-6);
    }
  }
}

TEST_CASE("probability construction gate") {
  CHECK_THROWS_AS(DiscreteMeasure::probability({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(DiscreteMeasure::probability({-0.1, 1.1}), InputError);
  auto m = DiscreteMeasure::probability({0.5, 0.5});
  CHECK(m.applied_correction() <= 1e-12);
  CHECK(m.total() == doctest::Approx(1.0));
}
