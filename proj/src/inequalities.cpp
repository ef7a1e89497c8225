#include "ppt/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace ppt {

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["lhs"] = std::isinf(lhs) ? nlohmann::json("inf") : nlohmann::json(lhs);
  j["rhs"] = std::isinf(rhs) ? nlohmann::json("inf") : nlohmann::json(rhs);
  j["margin"] = std::isinf(margin) ? nlohmann::json("inf") : nlohmann::json(margin);
  j["tolerance"] = tolerance;
  j["violated"] = violated;
  j["vacuous"] = vacuous;
  j["diagnostics"] = diagnostics;
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

void finalize_report(VerificationReport& rep, double solver_slack) {
  if (std::isinf(rep.lhs) && rep.lhs > 0) {
    // hypothesis failure: the inequality is vacuous, not violated
    rep.vacuous = true;
    rep.margin = 0.0;
    rep.violated = false;
    return;
  }
  if (std::isinf(rep.rhs)) {
    rep.margin = kInf;
    rep.violated = false;
    return;
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.diagnostics["solver_slack"] = solver_slack;
  rep.violated = rep.margin < -(rep.tolerance + solver_slack);
}

BaseCertificate BaseCertificate::dembo(double t) {
  if (t <= 0.0 || t >= 1.0) throw InputError("dembo certificate needs t in (0,1)");
  BaseCertificate c;
  c.a1 = 1.0 / t;
  c.a2 = 1.0 / (1.0 - t);
  c.provenance = Provenance::universal;
  return c;
}

VerificationReport verify_base_dembo(const DiscreteMeasure& gamma, const DiscreteMeasure& nu1,
                                     const DiscreteMeasure& nu2, double t, double tol) {
  if (t <= 0.0 || t >= 1.0) throw InputError("verify_base_dembo needs t in (0,1)");
  VerificationReport rep;
  rep.name = "base_dembo";
  rep.tolerance = tol;

  const int k = gamma.size();
  Mat rho(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(k), 1.0));
  for (int i = 0; i < k; ++i) rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
  AlphaFamily alpha = AlphaFamily::dembo(t);

  double h1 = relative_entropy(nu1, gamma);
  double h2 = relative_entropy(nu2, gamma);
  rep.rhs = mul_ext(1.0 / t, h1) + mul_ext(1.0 / (1.0 - t), h2);

  auto res = weak_transport(alpha, rho, nu1, nu2, tol * 0.1);
  rep.lhs = res.value;
  rep.diagnostics["solver_gap"] = res.gap;
  rep.diagnostics["feasibility_residual"] = res.residual;
  finalize_report(rep, res.gap);
  if (rep.violated) {
    // guard against solver artifacts before reporting a violation
    auto tight = weak_transport(alpha, rho, nu1, nu2, tol * 0.001);
    rep.lhs = tight.value;
    rep.diagnostics["solver_gap"] = tight.gap;
    finalize_report(rep, tight.gap);
    rep.diagnostics["resolve_guard"] = 1.0;
  }
  return rep;
}

VerificationReport verify_marton_process(const GroundSpace& space, const ProcessLaw& law,
                                         const ProcessLaw& pi1, const ProcessLaw& pi2, double t,
                                         double tol) {
  if (t <= 0.0 || t >= 1.0) throw InputError("verify_marton_process needs t in (0,1)");
  VerificationReport rep;
  rep.name = "marton_process";
  rep.tolerance = tol;
  rep.diagnostics["truncation_tail"] = law.tail_bound;

  double h1 = relative_entropy(pi1, law);
  double h2 = relative_entropy(pi2, law);
  rep.rhs = mul_ext(1.0 / t, h1) + mul_ext(1.0 / (1.0 - t), h2);

  LiftedCostSpec spec = LiftedCostSpec::weak_hamming(AlphaFamily::dembo(t));
  auto res = lifted_weak_cost(spec, space, pi1, pi2, tol * 0.1);
  rep.lhs = res.value;
  rep.diagnostics["solver_gap"] = res.gap;
  rep.diagnostics["feasibility_residual"] = res.residual;
  finalize_report(rep, res.gap);
  if (rep.violated) {
    auto tight = lifted_weak_cost(spec, space, pi1, pi2, tol * 0.001);
    rep.lhs = tight.value;
    rep.diagnostics["solver_gap"] = tight.gap;
    finalize_report(rep, tight.gap);
    rep.diagnostics["resolve_guard"] = 1.0;
  }
  return rep;
}

VerificationReport verify_general_marton_process(const BaseCertificate& cert,
                                                 const AlphaFamily& alpha,
                                                 const CostFunction& rho,
                                                 const GroundSpace& space,
                                                 const DiscreteMeasure& mu, int n,
                                                 const ProcessLaw& pi1, const ProcessLaw& pi2,
                                                 double tol) {
  VerificationReport rep;
  rep.name = "general_marton_process";
  rep.tolerance = tol;
  if (cert.provenance == BaseCertificate::Provenance::estimated) {
    rep.notes = "estimated base certificate: a pass is evidence, not proof";
    rep.diagnostics["certificate_estimated"] = 1.0;
    rep.diagnostics["certificate_samples"] = cert.samples;
  }
  rep.diagnostics["a1"] = cert.a1;
  rep.diagnostics["a2"] = cert.a2;

  DiscreteMeasure kap = DiscreteMeasure::dirac(n, pi1.index->mass_cap() + 1);
  ProcessLaw base = mixed_binomial_law(mu, kap, pi1.index);
  double h1 = relative_entropy(pi1, base);
  double h2 = relative_entropy(pi2, base);
  rep.rhs = mul_ext(cert.a1, h1) + mul_ext(cert.a2, h2);

  LiftedCostSpec spec = LiftedCostSpec::weak_general(alpha, rho);
  auto res = lifted_weak_cost(spec, space, pi1, pi2, tol * 0.1);
  rep.lhs = res.value;
  rep.diagnostics["solver_gap"] = res.gap;
  rep.diagnostics["feasibility_residual"] = res.residual;
  finalize_report(rep, res.gap);
  if (rep.violated) {
    auto tight = lifted_weak_cost(spec, space, pi1, pi2, tol * 0.001);
    rep.lhs = tight.value;
    rep.diagnostics["solver_gap"] = tight.gap;
    finalize_report(rep, tight.gap);
    rep.diagnostics["resolve_guard"] = 1.0;
  }
  return rep;
}

VerificationReport verify_talagrand_process(const BaseCertificate& cert, const CostFunction& rho,
                                            const GroundSpace& space, const DiscreteMeasure& mu,
                                            const DiscreteMeasure& kappa, const ProcessLaw& pi1,
                                            const ProcessLaw& pi2, double tol) {
  VerificationReport rep;
  rep.name = "talagrand_process";
  rep.tolerance = tol;
  rep.diagnostics["a1"] = cert.a1;
  rep.diagnostics["a2"] = cert.a2;
  if (cert.provenance == BaseCertificate::Provenance::estimated) {
    rep.notes = "estimated base certificate: a pass is evidence, not proof";
    rep.diagnostics["certificate_estimated"] = 1.0;
  }

  ProcessLaw base = mixed_binomial_law(mu, kappa, pi1.index);
  double h1 = relative_entropy(pi1, base);
  double h2 = relative_entropy(pi2, base);
  rep.rhs = mul_ext(cert.a1, h1) + mul_ext(cert.a2, h2);

  DiscreteMeasure lam1 = mass_law(pi1);
  DiscreteMeasure lam2 = mass_law(pi2);
  if (tv_distance(lam1, lam2) > 1e-9) {
    rep.lhs = kInf;
    rep.notes += (rep.notes.empty() ? "" : "; ");
    rep.notes += "mass laws differ: lifted cost infinite, inequality vacuous";
    finalize_report(rep);
    return rep;
  }
  Vec kap(static_cast<std::size_t>(pi1.index->mass_cap()) + 1, 0.0);
  for (int n = 0; n < kappa.size() && n <= pi1.index->mass_cap(); ++n)
    kap[static_cast<std::size_t>(n)] = kappa[n];
  double hmass = relative_entropy(lam1, DiscreteMeasure::probability(std::move(kap)));

  auto lifted = lifted_linear_cost(rho, space, pi1, pi2);
  rep.diagnostics["lifted_cost"] = lifted.value;
  rep.diagnostics["mass_entropy"] = hmass;
  rep.lhs = lifted.finite && !std::isinf(hmass)
                ? lifted.value + (cert.a1 + cert.a2) * hmass
                : kInf;
  finalize_report(rep);
  return rep;
}

VerificationReport verify_talagrand_gaussian(double m1, double m2, int n,
                                             const BaseCertificate& cert) {
  VerificationReport rep;
  rep.name = "talagrand_gaussian";
  rep.tolerance = 0.0;
  rep.diagnostics["a1"] = cert.a1;
  rep.diagnostics["a2"] = cert.a2;
  rep.notes = "lhs is a coupling upper bound; a pass is a true non-violation";
  // H(B_{N(m,1),n} | B_{N(0,1),n}) = n * m^2 / 2 and the translation coupling
  // bounds the lifted squared-distance cost by n (m1 - m2)^2.
  rep.lhs = n * (m1 - m2) * (m1 - m2);
  rep.rhs = cert.a1 * n * m1 * m1 / 2.0 + cert.a2 * n * m2 * m2 / 2.0;
  finalize_report(rep);
  return rep;
}

ConstantEstimate estimate_base_constant(const DiscreteMeasure& gamma, BaseCostKind kind,
                                        const AlphaFamily* alpha, const Mat& rho, int samples,
                                        RngStream& rng) {
  if (samples < 1) throw InputError("estimate_base_constant needs samples >= 1");
  const int k = gamma.size();
  ConstantEstimate best;

  auto random_density = [&]() {
    Vec w(static_cast<std::size_t>(k), 0.0);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      double f = gamma[i] > 0.0 ? std::exp(rng.normal()) : 0.0;
      w[static_cast<std::size_t>(i)] = f * gamma[i];
      total += w[static_cast<std::size_t>(i)];
    }
    for (double& x : w) x /= total;
    return DiscreteMeasure::probability(std::move(w));
  };

  for (int s = 0; s < samples; ++s) {
    DiscreteMeasure nu1 = random_density();
    DiscreteMeasure nu2 = random_density();
    double h = relative_entropy(nu1, gamma) + relative_entropy(nu2, gamma);
    if (h <= 1e-15 || std::isinf(h)) continue;
    double lhs;
    if (kind == BaseCostKind::linear) {
      lhs = ot_lp(rho, nu1, nu2).value;
    } else {
      lhs = weak_transport(*alpha, rho, nu1, nu2, 1e-8).value;
    }
    double ratio = lhs / h;
    if (ratio > best.estimate) {
      best.estimate = ratio;
      best.worst_nu1 = nu1.values();
      best.worst_nu2 = nu2.values();
    }
  }
  return best;
}

VerificationReport verify_tensorization(const DiscreteMeasure& gamma1,
                                        const DiscreteMeasure& gamma2, const AlphaFamily& alpha,
                                        double a1, double a2, const DiscreteMeasure& nu1,
                                        const DiscreteMeasure& nu2, double tol) {
  const int k1 = gamma1.size(), k2 = gamma2.size();
  const int K = k1 * k2;
  if (nu1.size() != K || nu2.size() != K)
    throw InputError("verify_tensorization: measures must live on the product space");

  VerificationReport rep;
  rep.name = "tensorization";
  rep.tolerance = tol;

  Vec gprod(static_cast<std::size_t>(K), 0.0);
  for (int x1 = 0; x1 < k1; ++x1)
    for (int x2 = 0; x2 < k2; ++x2)
      gprod[static_cast<std::size_t>(x1 * k2 + x2)] = gamma1[x1] * gamma2[x2];
  DiscreteMeasure gamma = DiscreteMeasure::probability(std::move(gprod));
  double h1 = relative_entropy(nu1, gamma);
  double h2 = relative_entropy(nu2, gamma);
  rep.rhs = mul_ext(a1, h1) + mul_ext(a2, h2);

  // summed product cost: one hamming channel per factor, reading only the
  // matching coordinate of the target
  WeakProblem prob;
  prob.source = nu1.values();
  prob.target = nu2.values();
  prob.alpha = &alpha;
  prob.channels.resize(static_cast<std::size_t>(K));
  for (int x1 = 0; x1 < k1; ++x1)
    for (int x2 = 0; x2 < k2; ++x2) {
      int x = x1 * k2 + x2;
      if (nu1[x] <= 0.0) continue;
      WeakChannel c1, c2;
      c1.weight = nu1[x];
      c2.weight = nu1[x];
      c1.a.assign(static_cast<std::size_t>(K), 0.0);
      c2.a.assign(static_cast<std::size_t>(K), 0.0);
      for (int y1 = 0; y1 < k1; ++y1)
        for (int y2 = 0; y2 < k2; ++y2) {
          int y = y1 * k2 + y2;
          c1.a[static_cast<std::size_t>(y)] = y1 == x1 ? 0.0 : 1.0;
          c2.a[static_cast<std::size_t>(y)] = y2 == x2 ? 0.0 : 1.0;
        }
      prob.channels[static_cast<std::size_t>(x)].push_back(std::move(c1));
      prob.channels[static_cast<std::size_t>(x)].push_back(std::move(c2));
    }
  WeakResult res = minimize_weak(prob, tol * 0.1);
  rep.lhs = res.value;
  rep.diagnostics["solver_gap"] = res.gap;
  rep.diagnostics["feasibility_residual"] = res.residual;
  finalize_report(rep, res.gap);
  if (rep.violated) {
    WeakResult tight = minimize_weak(prob, tol * 0.001);
    rep.lhs = tight.value;
    rep.diagnostics["solver_gap"] = tight.gap;
    finalize_report(rep, tight.gap);
    rep.diagnostics["resolve_guard"] = 1.0;
  }
  return rep;
}

}  // namespace ppt
