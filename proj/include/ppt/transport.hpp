#pragma once

#include <vector>

#include "ppt/config.hpp"
#include "ppt/ground.hpp"
#include "ppt/measures.hpp"
#include "ppt/numeric.hpp"
#include "ppt/solve.hpp"

namespace ppt {

struct CouplingResult {
  double value = 0.0;
  Mat coupling;  // empty when the cost is infinite (mass mismatch)
  bool feasible = true;
};

// Exact discrete optimal transport between two weight vectors for a given
// cost matrix. Mass mismatch yields value +inf (inf over the empty set).
CouplingResult ot_lp(const Mat& cost, const DiscreteMeasure& nu1, const DiscreteMeasure& nu2);

struct AssignmentResult {
  double value = 0.0;
  // permutation over the canonical point-list expansions: position i of xi's
  // expansion is matched with position permutation[i] of chi's; empty when
  // the masses differ (value +inf). Lexicographically smallest optimum.
  std::vector<int> permutation;
};

// Optimal assignment between equal-mass configurations under the base cost.
AssignmentResult assignment_cost(const CostFunction& omega, const GroundSpace& space,
                                 const Configuration& xi, const Configuration& chi);

// Partial transport: the smaller configuration is matched injectively into
// the larger one, minimizing the total cost.
double partial_assignment_cost(const CostFunction& omega, const GroundSpace& space,
                               const Configuration& xi, const Configuration& chi);

// sum_x [1 - nu1(x)/nu2(x)]_+^2 nu2(x); nu2-null points contribute 0.
double marton_cost(const DiscreteMeasure& nu1, const DiscreteMeasure& nu2);

struct WeakTransportResult {
  double value = 0.0;
  // kernel rows, one per source point with positive mass, each a probability
  // vector over the full target support
  Mat kernel;
  std::vector<int> kernel_rows;  // source indices the rows belong to
  double gap = 0.0;
  double residual = 0.0;
  Mat coupling;
};

// Weak (barycentric) transport cost from source to target: minimizes
//   sum_x source(x) * alpha( sum_y rho(x,y) p_x(y) )
// over kernels p with sum_x source(x) p_x = target.
WeakTransportResult weak_transport(const AlphaFamily& alpha, const Mat& rho,
                                   const DiscreteMeasure& source, const DiscreteMeasure& target,
                                   double tol = 1e-6, int max_iter = 200000);

}  // namespace ppt
