#include "ppt/lifted.hpp"

#include <algorithm>
#include <cmath>

namespace ppt {

LiftedCostSpec LiftedCostSpec::linear(CostFunction rho) {
  LiftedCostSpec s;
  s.kind = Kind::linear;
  s.rho = std::move(rho);
  return s;
}

LiftedCostSpec LiftedCostSpec::weak_hamming(AlphaFamily alpha) {
  LiftedCostSpec s;
  s.kind = Kind::weak_hamming;
  s.alpha = std::move(alpha);
  return s;
}

LiftedCostSpec LiftedCostSpec::weak_general(AlphaFamily alpha, CostFunction rho) {
  LiftedCostSpec s;
  s.kind = Kind::weak_general;
  s.alpha = std::move(alpha);
  s.rho = std::move(rho);
  return s;
}

LiftedLinearResult lifted_linear_cost(const CostFunction& rho, const GroundSpace& space,
                                      const ProcessLaw& pi1, const ProcessLaw& pi2,
                                      double mass_tol) {
  if (pi1.index->size() != pi2.index->size())
    throw InputError("lifted_linear_cost requires a shared configuration index");
  const ConfigurationSpaceIndex& index = *pi1.index;

  LiftedLinearResult out;
  out.coupling.assign(static_cast<std::size_t>(index.size()),
                      Vec(static_cast<std::size_t>(index.size()), 0.0));

  // The coupling must be block-diagonal over mass classes (off-class cells
  // cost +inf), so differing mass laws mean no finite-cost coupling exists.
  for (int n = 0; n <= index.mass_cap(); ++n) {
    double m1 = 0.0, m2 = 0.0;
    for (int i : index.indices_of_mass(n)) {
      m1 += pi1.prob(i);
      m2 += pi2.prob(i);
    }
    if (std::abs(m1 - m2) > mass_tol) {
      out.value = kInf;
      out.finite = false;
      out.coupling.clear();
      return out;
    }
  }

  double total = 0.0;
  for (int n = 0; n <= index.mass_cap(); ++n) {
    const auto& ids = index.indices_of_mass(n);
    Vec a, b;
    std::vector<int> ra, cb;
    for (int i : ids) {
      if (pi1.prob(i) > 0.0) {
        a.push_back(pi1.prob(i));
        ra.push_back(i);
      }
      if (pi2.prob(i) > 0.0) {
        b.push_back(pi2.prob(i));
        cb.push_back(i);
      }
    }
    if (a.empty() || b.empty()) continue;
    Mat cost(a.size(), Vec(b.size(), 0.0));
    for (std::size_t i = 0; i < ra.size(); ++i)
      for (std::size_t j = 0; j < cb.size(); ++j)
        cost[i][j] = assignment_cost(rho, space, index.config(ra[i]), index.config(cb[j])).value;
    OtResult r = ot_solve(cost, a, b, 1e-7);
    if (!r.feasible) {
      out.value = kInf;
      out.finite = false;
      out.coupling.clear();
      return out;
    }
    total += r.value;
    for (std::size_t i = 0; i < ra.size(); ++i)
      for (std::size_t j = 0; j < cb.size(); ++j)
        out.coupling[static_cast<std::size_t>(ra[i])][static_cast<std::size_t>(cb[j])] =
            r.plan[i][j];
  }
  out.value = total;
  return out;
}

namespace {

// Channel vector for one support point x of xi: per target configuration
// chi, the value fed to alpha (before mixing weights).
Vec channel_values(const LiftedCostSpec& spec, const GroundSpace& space, const Configuration& xi,
                   int x, const ConfigurationSpaceIndex& index) {
  Vec a(static_cast<std::size_t>(index.size()), 0.0);
  const int cx = xi.count(x);
  for (int j = 0; j < index.size(); ++j) {
    const Configuration& chi = index.config(j);
    if (spec.kind == LiftedCostSpec::Kind::weak_hamming) {
      a[static_cast<std::size_t>(j)] =
          positive_part(1.0 - static_cast<double>(chi.count(x)) / cx);
    } else {
      // atom configuration xi(x) delta_x
      std::vector<int> counts(static_cast<std::size_t>(index.ground_size()), 0);
      counts[static_cast<std::size_t>(x)] = cx;
      double t0 = partial_assignment_cost(spec.rho, space, chi,
                                          Configuration::from_counts(counts));
      a[static_cast<std::size_t>(j)] = t0 / cx;
    }
  }
  return a;
}

}  // namespace

double lifted_weak_cost_value(const LiftedCostSpec& spec, const GroundSpace& space,
                              const Configuration& xi,
                              const std::vector<std::pair<int, double>>& mixture,
                              const ConfigurationSpaceIndex& index) {
  if (spec.kind == LiftedCostSpec::Kind::linear)
    throw InputError("lifted_weak_cost_value needs a weak cost spec");
  double total = 0.0;
  for (int x = 0; x < index.ground_size(); ++x) {
    int cx = xi.count(x);
    if (cx == 0) continue;
    Vec a = channel_values(spec, space, xi, x, index);
    double u = 0.0;
    for (auto [j, w] : mixture) u += w * a[static_cast<std::size_t>(j)];
    double v = spec.alpha(std::max(0.0, u));
    if (std::isinf(v)) return kInf;
    total += cx * v;
  }
  return total;
}

LiftedWeakResult lifted_weak_cost(const LiftedCostSpec& spec, const GroundSpace& space,
                                  const ProcessLaw& pi1, const ProcessLaw& pi2, double tol,
                                  int max_iter) {
  if (spec.kind == LiftedCostSpec::Kind::linear)
    throw InputError("lifted_weak_cost needs a weak cost spec");
  if (pi1.index->size() != pi2.index->size())
    throw InputError("lifted_weak_cost requires a shared configuration index");
  const ConfigurationSpaceIndex& index = *pi1.index;

  WeakProblem prob;
  prob.source = pi1.p;
  prob.target = pi2.p;
  prob.alpha = &spec.alpha;
  prob.channels.resize(static_cast<std::size_t>(index.size()));
  for (int i = 0; i < index.size(); ++i) {
    if (pi1.prob(i) <= 0.0) continue;
    const Configuration& xi = index.config(i);
    for (int x = 0; x < index.ground_size(); ++x) {
      int cx = xi.count(x);
      if (cx == 0) continue;
      WeakChannel ch;
      ch.weight = pi1.prob(i) * cx;
      ch.a = channel_values(spec, space, xi, x, index);
      prob.channels[static_cast<std::size_t>(i)].push_back(std::move(ch));
    }
  }

  WeakResult r = minimize_weak(prob, tol, max_iter);
  LiftedWeakResult out;
  out.value = r.value;
  out.gap = r.gap;
  out.residual = r.residual;
  for (int i = 0; i < index.size(); ++i) {
    if (pi1.prob(i) <= 0.0) continue;
    Vec row(static_cast<std::size_t>(index.size()), 0.0);
    for (int j = 0; j < index.size(); ++j)
      row[static_cast<std::size_t>(j)] =
          r.coupling[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / pi1.prob(i);
    double s = sum(row);
    if (s > 0)
      for (double& w : row) w /= s;
    out.kernel.push_back(std::move(row));
    out.kernel_rows.push_back(i);
  }
  return out;
}

}  // namespace ppt
