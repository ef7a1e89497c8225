#include "doctest.h"

#include <cmath>

#include "ppt/inequalities.hpp"
#include "test_support.hpp"

using namespace ppt;
using namespace ppt_test;

namespace {

ProcessLaw random_density_law(const ProcessLaw& base, RngStream& rng) {
  Vec w(base.p.size(), 0.0);
  double tot = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = base.p[i] * std::exp(0.8 * rng.normal());
    tot += w[i];
  }
  for (auto& x : w) x /= tot;
  double c = 0.0;
  for (double x : w) c += x;
  w[0] += 1.0 - c;
  ProcessLaw law;
  law.index = base.index;
  law.p = std::move(w);
  law.exact = base.exact;
  law.tail_bound = base.tail_bound;
  return law;
}

}  // namespace

TEST_CASE("base dembo inequality on trivial and random triples") {
  RngStream rng(81, 0);
  auto gamma = random_probability(3, rng, 0.05);
  auto rep0 = verify_base_dembo(gamma, gamma, gamma, 0.5);
  CHECK_FALSE(rep0.violated);
  CHECK(rep0.lhs == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(rep0.rhs == doctest::Approx(0.0));

  for (int s = 0; s < 60; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 4);
    auto g = random_probability(k, rng, 0.02);
    auto n1 = random_probability(k, rng);
    auto n2 = random_probability(k, rng);
    double t = 0.1 + 0.8 * rng.uniform01();
    auto rep = verify_base_dembo(g, n1, n2, t);
    CHECK_FALSE(rep.violated);
  }
}

TEST_CASE("marton constant-4 special case at t = 1/2") {
  // at t = 1/2 the certificate is (2, 2); the classical constant-4 statement
  // is implied with room to spare
  RngStream rng(82, 0);
  for (int s = 0; s < 20; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 4);
    auto g = random_probability(k, rng, 0.02);
    auto n1 = random_probability(k, rng);
    auto n2 = random_probability(k, rng);
    double m2 = marton_cost(n2, n1);  // conditions on nu1
    double h = relative_entropy(n1, g) + relative_entropy(n2, g);
    CHECK(m2 <= 4.0 * h + 1e-9);
  }
}

TEST_CASE("marton process inequality on point masses and random densities") {
  auto space = GroundSpace::finite({"a", "b"}, {{0.0, 1.0}, {1.0, 0.0}});
  auto idx = make_index(2, 3);
  auto pois = poisson_law(DiscreteMeasure::weights({0.05, 0.05}), idx);

  // identical laws
  auto rep0 = verify_marton_process(space, pois, pois, pois, 0.5);
  CHECK_FALSE(rep0.violated);
  CHECK(rep0.lhs == doctest::Approx(0.0).epsilon(1e-8));

  // exhaustive point-mass pairs
  for (int i = 0; i < idx->size(); ++i)
    for (int j = 0; j < idx->size(); ++j) {
      ProcessLaw di, dj;
      di.index = dj.index = idx;
      di.p.assign(static_cast<std::size_t>(idx->size()), 0.0);
      dj.p = di.p;
      di.p[static_cast<std::size_t>(i)] = 1.0;
      dj.p[static_cast<std::size_t>(j)] = 1.0;
      auto rep = verify_marton_process(space, pois, di, dj, 0.5);
      CHECK_FALSE(rep.violated);
    }

  // random densities at several t
  RngStream rng(83, 0);
  for (double t : {0.25, 0.5, 0.75}) {
    for (int s = 0; s < 12; ++s) {
      auto p1 = random_density_law(pois, rng);
      auto p2 = random_density_law(pois, rng);
      auto rep = verify_marton_process(space, pois, p1, p2, t);
      CHECK_FALSE(rep.violated);
    }
  }
}

TEST_CASE("general marton process reproduces the hamming flavour") {
  auto space = GroundSpace::finite({"a", "b"}, {{0.0, 1.0}, {1.0, 0.0}});
  auto idx = make_index(2, 2);
  auto mu = DiscreteMeasure::uniform(2);
  RngStream rng(84, 0);
  auto b2 = mixed_binomial_law(mu, DiscreteMeasure::dirac(2, 3), idx);
  for (int s = 0; s < 6; ++s) {
    auto p1 = condition_on_mass(random_density_law(b2, rng), 2);
    auto p2 = condition_on_mass(random_density_law(b2, rng), 2);
    auto cert = BaseCertificate::dembo(0.5);
    auto rep_g = verify_general_marton_process(cert, AlphaFamily::dembo(0.5),
                                               CostFunction::hamming(), space, mu, 2, p1, p2);
    auto rep_h = verify_marton_process(space, b2, p1, p2, 0.5);
    CHECK_FALSE(rep_g.violated);
    CHECK(rep_g.lhs == doctest::Approx(rep_h.lhs).epsilon(1e-4));
    CHECK(rep_g.rhs == doctest::Approx(rep_h.rhs).epsilon(1e-9));
  }
}

TEST_CASE("general marton with a metric cost and an estimated certificate") {
  RngStream rng(85, 0);
  auto space = random_metric_space(3, rng);
  auto idx = make_index(3, 2);
  auto mu = random_probability(3, rng, 0.1);
  Mat rho = CostFunction::distance_power(1.0).matrix(space);
  auto alpha = AlphaFamily::square();
  auto est = estimate_base_constant(mu, BaseCostKind::weak, &alpha, rho, 60, rng);
  BaseCertificate cert;
  cert.a1 = cert.a2 = est.estimate * 1.1;
  cert.provenance = BaseCertificate::Provenance::estimated;
  cert.samples = 60;
  auto b2 = mixed_binomial_law(mu, DiscreteMeasure::dirac(2, 3), idx);
  for (int s = 0; s < 10; ++s) {
    auto p1 = condition_on_mass(random_density_law(b2, rng), 2);
    auto p2 = condition_on_mass(random_density_law(b2, rng), 2);
    auto rep = verify_general_marton_process(cert, alpha, CostFunction::distance_power(1.0),
                                             space, mu, 2, p1, p2);
    CHECK(rep.diagnostics.count("certificate_estimated") == 1);
    CHECK_FALSE(rep.violated);
  }
}

TEST_CASE("talagrand process inequality") {
  auto space = GroundSpace::finite({"a", "b"}, {{0.0, 1.0}, {1.0, 0.0}});
  auto idx = make_index(2, 4);
  auto mu = DiscreteMeasure::probability({0.3, 0.7});
  Vec kapw = {0.368, 0.368, 0.184, 0.061, 0.019};
  double c = 0.0;
  for (double x : kapw) c += x;
  for (auto& x : kapw) x /= c;
  double c2 = 0.0;
  for (double x : kapw) c2 += x;
  kapw[0] += 1.0 - c2;
  auto kappa = DiscreteMeasure::probability(kapw);
  auto base = mixed_binomial_law(mu, kappa, idx);

  // identical laws: both sides vanish
  BaseCertificate cert;
  cert.a1 = cert.a2 = 2.5;
  cert.provenance = BaseCertificate::Provenance::estimated;
  auto rep0 = verify_talagrand_process(cert, CostFunction::hamming(), space, mu, kappa, base, base);
  CHECK_FALSE(rep0.violated);
  CHECK(rep0.lhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep0.rhs == doctest::Approx(0.0).epsilon(1e-9));

  // mismatched mass laws are vacuous and flagged
  auto b1 = mixed_binomial_law(mu, DiscreteMeasure::dirac(1, 5), idx);
  auto b2 = mixed_binomial_law(mu, DiscreteMeasure::dirac(2, 5), idx);
  auto repv = verify_talagrand_process(cert, CostFunction::hamming(), space, mu, kappa, b1, b2);
  CHECK(repv.vacuous);
  CHECK_FALSE(repv.violated);

  // estimated-certificate run with matched mass laws
  RngStream rng(86, 0);
  Mat rho = CostFunction::hamming().matrix(space);
  auto est = estimate_base_constant(mu, BaseCostKind::linear, nullptr, rho, 80, rng);
  BaseCertificate cert2;
  cert2.a1 = cert2.a2 = est.estimate * 1.1;
  cert2.provenance = BaseCertificate::Provenance::estimated;
  cert2.samples = 80;
  auto p1 = mixed_binomial_law(DiscreteMeasure::probability({0.5, 0.5}), kappa, idx);
  auto p2 = mixed_binomial_law(DiscreteMeasure::probability({0.2, 0.8}), kappa, idx);
  auto rep = verify_talagrand_process(cert2, CostFunction::hamming(), space, mu, kappa, p1, p2);
  CHECK(rep.diagnostics.count("certificate_estimated") == 1);
  CHECK_FALSE(rep.vacuous);
}

TEST_CASE("gaussian talagrand closed form") {
  BaseCertificate cert;
  cert.a1 = cert.a2 = 4.0;
  cert.provenance = BaseCertificate::Provenance::known_closed_form;
  for (int m1 = -2; m1 <= 2; ++m1)
    for (int m2 = -2; m2 <= 2; ++m2)
      for (int n = 1; n <= 5; ++n) {
        auto rep = verify_talagrand_gaussian(m1, m2, n, cert);
        CHECK_FALSE(rep.violated);
        // antisymmetric means meet the bound exactly
        if (m1 == -m2) CHECK(rep.margin == doctest::Approx(0.0));
      }
}

TEST_CASE("estimated constants behave as expected") {
  RngStream rng(87, 0);
  // point-mass reference: only nu = gamma has finite entropy, estimate 0
  auto dirac = DiscreteMeasure::dirac(0, 2);
  Mat rho = {{0.0, 1.0}, {1.0, 0.0}};
  auto est0 = estimate_base_constant(dirac, BaseCostKind::linear, nullptr, rho, 30, rng);
  CHECK(est0.estimate == doctest::Approx(0.0));

  // dembo weak cost: the universal constant max(1/t, 1/(1-t)) caps the ratio
  auto alpha = AlphaFamily::dembo(0.5);
  auto unif = DiscreteMeasure::uniform(2);
  auto est1 = estimate_base_constant(unif, BaseCostKind::weak, &alpha, rho, 100, rng);
  CHECK(est1.estimate <= 2.0 + 1e-6);

  // linear hamming cost admits no finite certificate: the ratio blows up as
  // the measures approach the reference
  auto ratio_at = [&](double eps) {
    auto n1 = DiscreteMeasure::probability({0.5 + eps, 0.5 - eps});
    auto n2 = DiscreteMeasure::probability({0.5 - eps, 0.5 + eps});
    double lhs = ot_lp(rho, n1, n2).value;
    return lhs / (relative_entropy(n1, unif) + relative_entropy(n2, unif));
  };
  CHECK(ratio_at(1e-3) > ratio_at(1e-1));
  CHECK(ratio_at(1e-4) > 100.0);
}

TEST_CASE("tensorization of the weak hamming inequality") {
  RngStream rng(88, 0);
  auto g1 = DiscreteMeasure::uniform(2);
  auto g2 = DiscreteMeasure::uniform(2);
  auto alpha = AlphaFamily::dembo(0.5);

  // product of point masses
  auto d0 = DiscreteMeasure::dirac(0, 4);
  auto rep0 = verify_tensorization(g1, g2, alpha, 2.0, 2.0, d0, d0);
  CHECK_FALSE(rep0.violated);
  CHECK(rep0.lhs == doctest::Approx(0.0).epsilon(1e-8));

  for (int s = 0; s < 25; ++s) {
    auto n1 = random_probability(4, rng);
    auto n2 = random_probability(4, rng);
    auto rep = verify_tensorization(g1, g2, alpha, 2.0, 2.0, n1, n2);
    CHECK_FALSE(rep.violated);
  }

  // independent-kernel upper bound dominates the solved product cost for
  // product-form measures
  for (int s = 0; s < 5; ++s) {
    auto a1 = random_probability(2, rng, 0.05);
    auto a2 = random_probability(2, rng, 0.05);
    auto b1 = random_probability(2, rng, 0.05);
    auto b2 = random_probability(2, rng, 0.05);
    Vec w1(4), w2(4);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        w1[static_cast<std::size_t>(2 * x + y)] = a1[x] * a2[y];
        w2[static_cast<std::size_t>(2 * x + y)] = b1[x] * b2[y];
      }
    auto n1 = DiscreteMeasure::probability(w1);
    auto n2 = DiscreteMeasure::probability(w2);
    auto rep = verify_tensorization(g1, g2, alpha, 2.0, 2.0, n1, n2);
    Mat rho2 = {{0.0, 1.0}, {1.0, 0.0}};
    double factor_sum = weak_transport(alpha, rho2, a1, b1, 1e-8).value +
                        weak_transport(alpha, rho2, a2, b2, 1e-8).value;
    CHECK(rep.lhs <= factor_sum + 1e-5);
  }
}

TEST_CASE("fixed-size count law removes the mass entropy term") {
  // kappa = delta_n and matching-size laws: the mass term vanishes and the
  // check reduces to the plain fixed-size inequality
  auto space = GroundSpace::finite({"a", "b"}, {{0.0, 1.0}, {1.0, 0.0}});
  auto idx = make_index(2, 3);
  auto mu = DiscreteMeasure::probability({0.4, 0.6});
  auto kappa = DiscreteMeasure::dirac(2, 4);
  RngStream rng(89, 0);
  BaseCertificate cert;
  cert.a1 = cert.a2 = 2.2;
  cert.provenance = BaseCertificate::Provenance::estimated;
  auto p1 = mixed_binomial_law(DiscreteMeasure::probability({0.7, 0.3}), kappa, idx);
  auto p2 = mixed_binomial_law(DiscreteMeasure::probability({0.2, 0.8}), kappa, idx);
  auto rep = verify_talagrand_process(cert, CostFunction::hamming(), space, mu, kappa, p1, p2);
  CHECK(rep.diagnostics.at("mass_entropy") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.lhs == doctest::Approx(rep.diagnostics.at("lifted_cost")).epsilon(1e-12));
}
