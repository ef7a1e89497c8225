#pragma once

#include <vector>

#include "ppt/inequalities.hpp"
#include "ppt/processes.hpp"

namespace ppt {

// The three entropy definitions floating around modified log-Sobolev
// statements. `standard` is Ent(e^F) = E[F e^F] - E[e^F] log E[e^F]; the
// other two are the display variants (see their names).
enum class EntropyDefinition {
  standard,           // E[F e^F] - E[e^F] log E[e^F]
  variant_mean_exp,   // E[F e^F] - E[F] E[e^F]
  variant_mean_log,   // E[F e^F] - E[F] log E[e^F]
};

// Exact entropy of e^F under an enumerated law; overflow-guarded by shifting
// F by its maximum.
double ent_exp(const Functional& F, const ProcessLaw& law,
               EntropyDefinition def = EntropyDefinition::standard);

struct McEstimate {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Batched Monte Carlo estimate of the entropy over samples (95% CI from
// batch means).
McEstimate ent_exp_mc(const Functional& F, const std::vector<Configuration>& samples,
                      EntropyDefinition def = EntropyDefinition::standard, int batches = 32);

struct RcResult {
  double value = 0.0;
  Vec minimizer;  // probability weights over the enumeration
  double gap = 0.0;
};

// Infimum convolution R_c F(xi) = min over laws Pi of Pi(F) + lambda *
// c1(xi, Pi), where c1 is the weak hamming-type cost with alpha_1.
RcResult inf_conv_Rc(const Functional& F, const Configuration& xi, double lambda,
                     const ConfigurationSpaceIndex& index, double tol = 1e-6);

// Modified log-Sobolev via the infimum convolution, exact on the enumerated
// law: Ent(e^F) <= 1/(1-lambda) E[(F - R_{lambda c1} F) e^F].
VerificationReport verify_logsob_Rc(const ProcessLaw& law, const Functional& F, double lambda,
                                    double tol = 1e-4,
                                    EntropyDefinition def = EntropyDefinition::standard);

struct MonotoneLogSobConfig {
  double rate = 1.0;
  std::vector<std::pair<double, double>> box = {{0.0, 1.0}};
  double lambda = 0.5;
  int n_samples = 20000;
  std::uint64_t seed = 1;
  bool use_wu = false;  // replace phi_lambda by Wu's phi_w
};

// Monte Carlo check of Ent(e^F) <= E[e^F sum_x phi_lambda(D_x^- F)] for
// convex nondecreasing F under a homogeneous Poisson process; violation is
// declared only when the confidence intervals separate.
VerificationReport verify_logsob_monotone(const MonotoneLogSobConfig& cfg, const Functional& F);

}  // namespace ppt
