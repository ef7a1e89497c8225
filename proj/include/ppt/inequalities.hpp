#pragma once

#include <map>
#include <string>
#include <vector>

#include "ppt/lifted.hpp"
#include "ppt/processes.hpp"
#include "ppt/rng.hpp"
#include "ppt/transport.hpp"

#include "json.hpp"

namespace ppt {

// Outcome of one inequality check: lhs <= rhs up to the effective tolerance
// (stated tolerance + solver slack carried in the diagnostics).
struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double tolerance = 0.0;
  bool violated = false;
  bool vacuous = false;  // infinite lhs hypothesis failure; inequality holds trivially
  std::map<std::string, double> diagnostics;
  std::string notes;

  nlohmann::json to_json() const;
};

// Finalizes margin/violated from lhs, rhs, tolerance and an extra solver
// slack; re-solve guards are the caller's business.
void finalize_report(VerificationReport& rep, double solver_slack = 0.0);

struct BaseCertificate {
  enum class Provenance { known_closed_form, universal, estimated };
  double a1 = 0.0;
  double a2 = 0.0;
  Provenance provenance = Provenance::universal;
  int samples = 0;  // for estimated certificates

  static BaseCertificate dembo(double t);  // (1/t, 1/(1-t)), universal
};

// Universal base-space inequality with the Dembo family and Hamming cost:
// weak cost <= (1/t) H(nu1|gamma) + (1/(1-t)) H(nu2|gamma).
VerificationReport verify_base_dembo(const DiscreteMeasure& gamma, const DiscreteMeasure& nu1,
                                     const DiscreteMeasure& nu2, double t, double tol = 1e-6);

// Process-level Marton inequality for the hamming-flavoured weak lift:
// T_{c_t}(Pi2|Pi1) <= (1/t) H(Pi1|law) + (1/(1-t)) H(Pi2|law).
VerificationReport verify_marton_process(const GroundSpace& space, const ProcessLaw& law,
                                         const ProcessLaw& pi1, const ProcessLaw& pi2, double t,
                                         double tol = 1e-4);

// General Marton-type process inequality with certificate constants for the
// base measure mu and cost (alpha, rho); law is the size-n binomial law.
VerificationReport verify_general_marton_process(const BaseCertificate& cert,
                                                 const AlphaFamily& alpha,
                                                 const CostFunction& rho,
                                                 const GroundSpace& space,
                                                 const DiscreteMeasure& mu, int n,
                                                 const ProcessLaw& pi1, const ProcessLaw& pi2,
                                                 double tol = 1e-4);

// Talagrand-type process inequality:
// T_rho-lift(Pi1,Pi2) + (a1+a2) H(lambda|kappa) <= a1 H(Pi1|B) + a2 H(Pi2|B),
// vacuously true (and flagged) when the mass laws differ.
VerificationReport verify_talagrand_process(const BaseCertificate& cert, const CostFunction& rho,
                                            const GroundSpace& space, const DiscreteMeasure& mu,
                                            const DiscreteMeasure& kappa, const ProcessLaw& pi1,
                                            const ProcessLaw& pi2, double tol = 1e-6);

// Closed-form Gaussian instance of the Talagrand lift: binomial processes of
// size n over unit-variance Gaussians with means m1, m2. The lhs is the
// n (m1 - m2)^2 coupling upper bound, the rhs the certificate-weighted
// entropies n m_i^2 / 2; a pass is a true non-violation.
VerificationReport verify_talagrand_gaussian(double m1, double m2, int n,
                                             const BaseCertificate& cert);

enum class BaseCostKind { linear, weak };

struct ConstantEstimate {
  double estimate = 0.0;  // empirical lower bound for the best symmetric constant
  Vec worst_nu1, worst_nu2;
};

// max over sampled pairs of lhs / (H1 + H2); a lower bound on the optimal
// symmetric constant of the base transport-entropy inequality.
ConstantEstimate estimate_base_constant(const DiscreteMeasure& gamma, BaseCostKind kind,
                                        const AlphaFamily* alpha, const Mat& rho, int samples,
                                        RngStream& rng);

// Tensorization sanity check: the two-fold product of base measures (each
// with a weak hamming certificate) against the summed product cost.
VerificationReport verify_tensorization(const DiscreteMeasure& gamma1,
                                        const DiscreteMeasure& gamma2, const AlphaFamily& alpha,
                                        double a1, double a2, const DiscreteMeasure& nu1,
                                        const DiscreteMeasure& nu2, double tol = 1e-4);

}  // namespace ppt
