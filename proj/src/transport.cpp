#include "ppt/transport.hpp"

#include <algorithm>
#include <cmath>

namespace ppt {

CouplingResult ot_lp(const Mat& cost, const DiscreteMeasure& nu1, const DiscreteMeasure& nu2) {
  CouplingResult out;
  OtResult r = ot_solve(cost, nu1.values(), nu2.values());
  out.value = r.value;
  out.feasible = r.feasible;
  out.coupling = std::move(r.plan);
  if (!r.feasible) out.coupling.clear();
  return out;
}

namespace {

Mat expansion_cost_matrix(const CostFunction& omega, const GroundSpace& space,
                          const Configuration& xi, const Configuration& chi) {
  Mat c;
  if (xi.finite_mode() != chi.finite_mode())
    throw InputError("assignment requires configurations of the same kind");
  if (xi.finite_mode()) {
    auto xs = xi.expand_indices();
    auto ys = chi.expand_indices();
    c.assign(xs.size(), Vec(ys.size(), 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) c[i][j] = omega.on_indices(space, xs[i], ys[j]);
  } else {
    auto xs = xi.expand_points();
    auto ys = chi.expand_points();
    c.assign(xs.size(), Vec(ys.size(), 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) c[i][j] = omega.on_points(xs[i], ys[j]);
  }
  return c;
}

}  // namespace

AssignmentResult assignment_cost(const CostFunction& omega, const GroundSpace& space,
                                 const Configuration& xi, const Configuration& chi) {
  AssignmentResult out;
  if (xi.total_mass() != chi.total_mass()) {
    out.value = kInf;
    return out;
  }
  if (xi.total_mass() == 0) return out;
  Mat c = expansion_cost_matrix(omega, space, xi, chi);
  out.value = hungarian_lex_smallest(c, out.permutation);
  return out;
}

double partial_assignment_cost(const CostFunction& omega, const GroundSpace& space,
                               const Configuration& xi, const Configuration& chi) {
  int nx = xi.total_mass(), ny = chi.total_mass();
  if (nx == 0 || ny == 0) return 0.0;
  // Cost entries keep the orientation omega(point of xi, point of chi); the
  // smaller side sits on the rows and is matched injectively into the other.
  Mat full = expansion_cost_matrix(omega, space, xi, chi);
  Mat c;
  if (nx >= ny) {
    c.assign(static_cast<std::size_t>(ny), Vec(static_cast<std::size_t>(nx), 0.0));
    for (int i = 0; i < ny; ++i)
      for (int j = 0; j < nx; ++j)
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            full[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  } else {
    c = std::move(full);
  }
  const std::size_t k = c.size(), n = c[0].size();
  // pad with zero rows so unmatched points of the larger side are free
  Mat padded(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < k; ++i) padded[i] = c[i];
  std::vector<int> perm;
  return hungarian(padded, perm);
}

double marton_cost(const DiscreteMeasure& nu1, const DiscreteMeasure& nu2) {
  if (!nu1.is_probability() || !nu2.is_probability())
    throw InputError("marton_cost requires probability measures");
  if (nu1.size() != nu2.size()) throw InputError("marton_cost requires a common finite space");
  double total = 0.0;
  for (int x = 0; x < nu1.size(); ++x) {
    if (nu2[x] <= 0.0) continue;
    double r = positive_part(1.0 - nu1[x] / nu2[x]);
    total += r * r * nu2[x];
  }
  return total;
}

WeakTransportResult weak_transport(const AlphaFamily& alpha, const Mat& rho,
                                   const DiscreteMeasure& source, const DiscreteMeasure& target,
                                   double tol, int max_iter) {
  if (!source.is_probability() || !target.is_probability())
    throw InputError("weak_transport requires probability measures");
  const int k = source.size();
  if (target.size() != k) throw InputError("weak_transport requires a common finite space");
  if (static_cast<int>(rho.size()) != k)
    throw InputError("weak_transport: rho matrix must match the space size");

  WeakProblem prob;
  prob.source = source.values();
  prob.target = target.values();
  prob.alpha = &alpha;
  prob.channels.resize(static_cast<std::size_t>(k));
  for (int x = 0; x < k; ++x) {
    if (source[x] <= 0.0) continue;
    WeakChannel ch;
    ch.weight = source[x];
    ch.a = rho[static_cast<std::size_t>(x)];
    prob.channels[static_cast<std::size_t>(x)].push_back(std::move(ch));
  }
  WeakResult r = minimize_weak(prob, tol, max_iter);

  WeakTransportResult out;
  out.value = r.value;
  out.gap = r.gap;
  out.residual = r.residual;
  out.coupling = r.coupling;
  for (int x = 0; x < k; ++x) {
    if (source[x] <= 0.0) continue;
    Vec row(static_cast<std::size_t>(k), 0.0);
    for (int y = 0; y < k; ++y)
      row[static_cast<std::size_t>(y)] =
          r.coupling[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] / source[x];
    // guard against drift so each row is an exact probability vector
    double s = sum(row);
    if (s > 0)
      for (double& w : row) w /= s;
    out.kernel.push_back(std::move(row));
    out.kernel_rows.push_back(x);
  }
  return out;
}

}  // namespace ppt
