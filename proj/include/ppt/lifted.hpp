#pragma once

#include <vector>

#include "ppt/processes.hpp"
#include "ppt/solve.hpp"
#include "ppt/transport.hpp"

namespace ppt {

// Cost specification for process-level transport: either the linear lift of
// a base cost (configuration ground cost = optimal assignment), or a weak
// cost built from an alpha family — the hamming flavour uses the averaged
// missing-mass fractions [1 - chi(x)/xi(x)]_+, the general flavour averages
// partial transport costs to xi(x) delta_x.
struct LiftedCostSpec {
  enum class Kind { linear, weak_hamming, weak_general };
  Kind kind = Kind::linear;
  CostFunction rho = CostFunction::hamming();
  AlphaFamily alpha = AlphaFamily::square();

  static LiftedCostSpec linear(CostFunction rho);
  static LiftedCostSpec weak_hamming(AlphaFamily alpha);
  static LiftedCostSpec weak_general(AlphaFamily alpha, CostFunction rho);
};

struct LiftedLinearResult {
  double value = 0.0;
  bool finite = true;
  Mat coupling;  // over configuration indices; empty when infinite
};

// T_rho lifted to process laws: exact LP over couplings of the two
// probability vectors with ground cost assignment_cost(rho, ., .).
// Cells with mismatched masses carry infinite cost and are excluded; the LP
// decomposes over mass classes, and differing mass laws give +inf.
LiftedLinearResult lifted_linear_cost(const CostFunction& rho, const GroundSpace& space,
                                      const ProcessLaw& pi1, const ProcessLaw& pi2,
                                      double mass_tol = 1e-9);

// Direct evaluation of the weak configuration-level cost c(xi, Pi) for a
// mixture Pi given by (configuration index, weight) pairs.
double lifted_weak_cost_value(const LiftedCostSpec& spec, const GroundSpace& space,
                              const Configuration& xi,
                              const std::vector<std::pair<int, double>>& mixture,
                              const ConfigurationSpaceIndex& index);

struct LiftedWeakResult {
  double value = 0.0;
  Mat kernel;                    // one probability row per retained source configuration
  std::vector<int> kernel_rows;  // configuration indices of the rows
  double gap = 0.0;
  double residual = 0.0;
};

// Weak transport between process laws: minimizes
//   sum_xi Pi1(xi) c(xi, p_xi)   s.t.  sum_xi Pi1(xi) p_xi = Pi2,
// where c is the weak cost of the spec. Pi1 is the conditioning side.
LiftedWeakResult lifted_weak_cost(const LiftedCostSpec& spec, const GroundSpace& space,
                                  const ProcessLaw& pi1, const ProcessLaw& pi2,
                                  double tol = 1e-5, int max_iter = 400000);

}  // namespace ppt
