#pragma once

#include <functional>
#include <vector>

#include "ppt/ground.hpp"
#include "ppt/numeric.hpp"

namespace ppt {

// ---- exact linear transport (dense transportation simplex) ----

struct OtResult {
  double value = 0.0;
  Mat plan;  // row marginals = a, column marginals = b
  int iterations = 0;
  bool feasible = true;  // false on mass mismatch (value = +inf, empty plan)
};

// Exact optimum of  min <cost, P>  over couplings of a and b. All cost
// entries must be finite; mass mismatch beyond mass_tol yields an infeasible
// result rather than an error (inf over an empty set).
OtResult ot_solve(const Mat& cost, const Vec& a, const Vec& b, double mass_tol = 1e-9);

// ---- exact min-cost assignment ----

// O(n^3) Hungarian method on a square matrix; fills row -> column.
double hungarian(const Mat& cost, std::vector<int>& row_to_col);

// As above but returning the lexicographically smallest optimal permutation
// (prefix-fixing re-solves; exact for the sizes used here).
double hungarian_lex_smallest(const Mat& cost, std::vector<int>& row_to_col);

// ---- weak (barycentric) costs: generic convex solvers ----

// One channel of a weak objective: contributes weight * alpha(<a, p>) where
// p is a probability row over targets.
struct WeakChannel {
  double weight = 1.0;
  Vec a;  // per retained target column
};

// min over couplings pi of  sum_i source_i * sum_m alpha(u_im),  with
// u_im = <channels[i][m].a, pi_i / source_i>, channel weights folding in.
struct WeakProblem {
  Vec source;
  Vec target;
  std::vector<std::vector<WeakChannel>> channels;  // indexed by source row
  const AlphaFamily* alpha = nullptr;
};

struct WeakResult {
  Mat coupling;  // full source x target matrix
  double value = 0.0;
  double gap = kInf;        // Frank-Wolfe duality gap at termination
  double residual = kInf;   // max marginal deviation of the coupling
  int iterations = 0;
  bool converged = false;
};

// Pairwise Frank-Wolfe over the transportation polytope with exact
// transportation-simplex linear minimization oracles. Throws SolverFailure
// when the duality gap fails to reach tol within max_iter iterations.
WeakResult minimize_weak(const WeakProblem& prob, double tol, int max_iter = 200000);

// min over the probability simplex of  <linear, w> + sum_m weight_m *
// alpha(<a_m, w>). Used for convex distances and infimum convolutions.
struct SimplexObjective {
  Vec linear;                        // may be empty (treated as zero)
  std::vector<WeakChannel> channels; // may be empty
  const AlphaFamily* alpha = nullptr;
  int dim = 0;
};

struct SimplexResult {
  Vec w;
  double value = 0.0;
  double gap = kInf;
  int iterations = 0;
  bool converged = false;
};

// start_index, when >= 0, selects the initial vertex (it must have a finite
// objective value).
SimplexResult minimize_on_simplex(const SimplexObjective& obj, double tol, int max_iter = 200000,
                                  int start_index = -1);

}  // namespace ppt
