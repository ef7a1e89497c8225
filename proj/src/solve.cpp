#include "ppt/solve.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ppt {

namespace {

double flat_dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Transportation simplex.
//
// Dense primal simplex on the transportation polytope with a northwest-corner
// starting basis and Bland's rule on both the entering and the leaving cell,
// which rules out cycling through degenerate pivots. Problem sizes here are
// tiny (tens of support points), so simplicity wins over sparse cleverness.
// ---------------------------------------------------------------------------

namespace {

struct TransportSimplex {
  int m, n;
  const Mat& cost;
  Vec a, b;
  Vec flow;               // m*n, row-major
  std::vector<char> basic;
  std::vector<std::pair<int, int>> basis_cells;

  TransportSimplex(const Mat& c, Vec av, Vec bv)
      : m(static_cast<int>(av.size())),
        n(static_cast<int>(bv.size())),
        cost(c),
        a(std::move(av)),
        b(std::move(bv)),
        flow(static_cast<std::size_t>(m) * n, 0.0),
        basic(static_cast<std::size_t>(m) * n, 0) {}

  std::size_t id(int i, int j) const { return static_cast<std::size_t>(i) * n + j; }

  void northwest_start() {
    Vec ra = a, rb = b;
    int i = 0, j = 0;
    for (;;) {
      double take = std::min(ra[static_cast<std::size_t>(i)], rb[static_cast<std::size_t>(j)]);
      take = std::max(take, 0.0);
      flow[id(i, j)] = take;
      basic[id(i, j)] = 1;
      basis_cells.push_back({i, j});
      ra[static_cast<std::size_t>(i)] -= take;
      rb[static_cast<std::size_t>(j)] -= take;
      if (i == m - 1 && j == n - 1) break;
      bool advance_row;
      if (i == m - 1)
        advance_row = false;
      else if (j == n - 1)
        advance_row = true;
      else
        advance_row = ra[static_cast<std::size_t>(i)] <= rb[static_cast<std::size_t>(j)];
      if (advance_row)
        ++i;
      else
        ++j;
    }
  }

  // Solve u_i + v_j = c_ij over the basis tree (u_0 = 0).
  void solve_duals(Vec& u, Vec& v) const {
    const int nodes = m + n;
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(nodes));
    for (auto [i, j] : basis_cells) {
      adj[static_cast<std::size_t>(i)].push_back({m + j, j});
      adj[static_cast<std::size_t>(m + j)].push_back({i, j});
    }
    u.assign(static_cast<std::size_t>(m), 0.0);
    v.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int node = q.front();
      q.pop();
      for (auto [next, j] : adj[static_cast<std::size_t>(node)]) {
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        if (node < m)  // row -> col
          v[static_cast<std::size_t>(j)] =
              cost[static_cast<std::size_t>(node)][static_cast<std::size_t>(j)] -
              u[static_cast<std::size_t>(node)];
        else  // col -> row
          u[static_cast<std::size_t>(next)] =
              cost[static_cast<std::size_t>(next)][static_cast<std::size_t>(j)] -
              v[static_cast<std::size_t>(node - m)];
        q.push(next);
      }
    }
  }

  // Tree path from column node j_e to row node i_e; returns the cells along
  // the path in order.
  std::vector<std::pair<int, int>> tree_path(int i_e, int j_e) const {
    const int nodes = m + n;
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(nodes));
    for (auto [i, j] : basis_cells) {
      adj[static_cast<std::size_t>(i)].push_back({m + j, j});
      adj[static_cast<std::size_t>(m + j)].push_back({i, j});
    }
    std::vector<int> parent(static_cast<std::size_t>(nodes), -2);
    std::queue<int> q;
    q.push(m + j_e);
    parent[static_cast<std::size_t>(m + j_e)] = -1;
    while (!q.empty()) {
      int node = q.front();
      q.pop();
      if (node == i_e) break;
      for (auto [next, j] : adj[static_cast<std::size_t>(node)]) {
        (void)j;
        if (parent[static_cast<std::size_t>(next)] != -2) continue;
        parent[static_cast<std::size_t>(next)] = node;
        q.push(next);
      }
    }
    std::vector<int> nodes_path;
    for (int node = i_e; node != -1; node = parent[static_cast<std::size_t>(node)]) {
      if (node == -2) throw SolverFailure("transport basis tree disconnected", 0, kInf, kInf);
      nodes_path.push_back(node);
    }
    std::reverse(nodes_path.begin(), nodes_path.end());  // j_e-node ... i_e-node
    std::vector<std::pair<int, int>> cells;
    for (std::size_t t = 0; t + 1 < nodes_path.size(); ++t) {
      int x = nodes_path[t], y = nodes_path[t + 1];
      int row = x < m ? x : y;
      int col = x < m ? y - m : x - m;
      cells.push_back({row, col});
    }
    return cells;
  }

  int run(int max_iter, double tol_rc) {
    northwest_start();
    Vec u, v;
    for (int iter = 0; iter < max_iter; ++iter) {
      solve_duals(u, v);
      int ei = -1, ej = -1;
      for (int i = 0; i < m && ei < 0; ++i)
        for (int j = 0; j < n; ++j) {
          if (basic[id(i, j)]) continue;
          double rc = cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                      u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
          if (rc < -tol_rc) {
            ei = i;
            ej = j;
            break;
          }
        }
      if (ei < 0) return iter;  // optimal

      auto path = tree_path(ei, ej);
      // entering cell is '+'; signs along the path alternate starting '-'
      double theta = kInf;
      int li = -1, lj = -1;
      for (std::size_t t = 0; t < path.size(); t += 2) {
        auto [i, j] = path[t];
        double fl = flow[id(i, j)];
        if (fl < theta ||
            (fl == theta && li >= 0 && std::make_pair(i, j) < std::make_pair(li, lj))) {
          theta = fl;
          li = i;
          lj = j;
        }
      }
      if (li < 0) throw SolverFailure("transportation pivot found no leaving cell", 0, kInf, kInf);
      theta = std::max(theta, 0.0);
      flow[id(ei, ej)] = theta;
      basic[id(ei, ej)] = 1;
      for (std::size_t t = 0; t < path.size(); ++t) {
        auto [i, j] = path[t];
        if (t % 2 == 0)
          flow[id(i, j)] = std::max(0.0, flow[id(i, j)] - theta);
        else
          flow[id(i, j)] += theta;
      }
      basic[id(li, lj)] = 0;
      flow[id(li, lj)] = 0.0;
      basis_cells.push_back({ei, ej});
      basis_cells.erase(std::find(basis_cells.begin(), basis_cells.end(), std::make_pair(li, lj)));
    }
    throw SolverFailure("transportation simplex hit its iteration cap", 0, kInf, kInf);
  }
};

}  // namespace

OtResult ot_solve(const Mat& cost, const Vec& a, const Vec& b, double mass_tol) {
  const int M = static_cast<int>(a.size());
  const int N = static_cast<int>(b.size());
  if (cost.size() != a.size()) throw InputError("ot_solve: cost rows must match source size");
  for (const auto& row : cost) {
    if (row.size() != b.size()) throw InputError("ot_solve: cost cols must match target size");
    for (double c : row)
      if (!std::isfinite(c)) throw InputError("ot_solve: cost entries must be finite");
  }
  for (double x : a)
    if (x < 0.0) throw InputError("ot_solve: negative source weight");
  for (double x : b)
    if (x < 0.0) throw InputError("ot_solve: negative target weight");

  OtResult out;
  out.plan.assign(static_cast<std::size_t>(M), Vec(static_cast<std::size_t>(N), 0.0));
  double ta = sum(a), tb = sum(b);
  if (std::abs(ta - tb) > mass_tol * std::max(1.0, std::max(ta, tb))) {
    out.value = kInf;
    out.feasible = false;
    out.plan.clear();
    return out;
  }
  if (ta <= 0.0 || tb <= 0.0) return out;  // zero measures couple trivially

  std::vector<int> rows, cols;
  for (int i = 0; i < M; ++i)
    if (a[static_cast<std::size_t>(i)] > 0.0) rows.push_back(i);
  for (int j = 0; j < N; ++j)
    if (b[static_cast<std::size_t>(j)] > 0.0) cols.push_back(j);

  Mat c(rows.size(), Vec(cols.size(), 0.0));
  Vec ca(rows.size()), cb(cols.size());
  double maxc = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ca[i] = a[static_cast<std::size_t>(rows[i])];
    for (std::size_t j = 0; j < cols.size(); ++j) {
      c[i][j] = cost[static_cast<std::size_t>(rows[i])][static_cast<std::size_t>(cols[j])];
      maxc = std::max(maxc, std::abs(c[i][j]));
    }
  }
  double scale = ta / tb;  // exact balance after compression
  for (std::size_t j = 0; j < cols.size(); ++j)
    cb[j] = b[static_cast<std::size_t>(cols[j])] * scale;

  TransportSimplex ts(c, ca, cb);
  out.iterations = ts.run(200000, 1e-11 * (1.0 + maxc));

  double value = 0.0;
  for (auto [i, j] : ts.basis_cells) {
    double fl = ts.flow[ts.id(i, j)];
    out.plan[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])]
            [static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])] = fl;
    value += fl * c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  out.value = value;
  return out;
}

// ---------------------------------------------------------------------------
// Hungarian assignment (potentials form, O(n^3)).
// ---------------------------------------------------------------------------

double hungarian(const Mat& cost, std::vector<int>& row_to_col) {
  const int n = static_cast<int>(cost.size());
  row_to_col.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return 0.0;
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw InputError("hungarian: matrix must be square");

  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), kInf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = p[static_cast<std::size_t>(j0)], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                     u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (int i = 0; i < n; ++i)
    total += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(row_to_col[static_cast<std::size_t>(i)])];
  return total;
}

double hungarian_lex_smallest(const Mat& cost, std::vector<int>& row_to_col) {
  const int n = static_cast<int>(cost.size());
  double opt = hungarian(cost, row_to_col);
  if (n > 24) return opt;  // re-solve polish is O(n^5); plain solution is already deterministic
  const double tol = 1e-9 * (1.0 + std::abs(opt));

  std::vector<int> cols(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;
  std::vector<int> chosen;
  double prefix = 0.0;
  for (int i = 0; i < n; ++i) {
    bool fixed = false;
    for (std::size_t cj = 0; cj < cols.size() && !fixed; ++cj) {
      int j = cols[cj];
      // optimal completion with sigma(i) = j?
      Mat sub;
      sub.reserve(static_cast<std::size_t>(n - i - 1));
      for (int r = i + 1; r < n; ++r) {
        Vec row;
        row.reserve(cols.size() - 1);
        for (int jc : cols)
          if (jc != j) row.push_back(cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(jc)]);
        sub.push_back(std::move(row));
      }
      std::vector<int> dummy;
      double rest = hungarian(sub, dummy);
      double total = prefix + cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + rest;
      if (total <= opt + tol) {
        prefix += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        chosen.push_back(j);
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(cj));
        fixed = true;
      }
    }
    if (!fixed) return opt;  // numerical fallback: keep the plain solution
  }
  row_to_col = chosen;
  return opt;
}

// ---------------------------------------------------------------------------
// Weak-cost solvers (pairwise Frank-Wolfe with exact linear oracles).
// ---------------------------------------------------------------------------

namespace {

// Objective state over a compressed coupling: keeps per-channel averages so
// function/gradient evaluations stay O(#channels * n).
struct WeakEval {
  const WeakProblem* prob;
  int m, n;
  // channels for retained rows/cols only; weight folded, a rescaled by 1/a_i
  struct Ch {
    int row;
    double weight;
    Vec a_over_source;  // a_j / source_i per retained column
    double lo, hi;      // range of a values (for domain checks)
  };
  std::vector<Ch> chs;
  double constant_term = 0.0;

  double value_at_u(const Vec& u) const {
    double f = constant_term;
    const AlphaFamily& alpha = *prob->alpha;
    for (std::size_t c = 0; c < chs.size(); ++c) {
      double v = alpha(std::max(0.0, u[c]));
      if (std::isinf(v)) return kInf;
      f += chs[c].weight * v;
    }
    return f;
  }

  Vec u_of(const Vec& x) const {  // x is flat m*n coupling
    Vec u(chs.size(), 0.0);
    for (std::size_t c = 0; c < chs.size(); ++c) {
      const Ch& ch = chs[c];
      double s = 0.0;
      const double* xr = x.data() + static_cast<std::size_t>(ch.row) * n;
      for (int j = 0; j < n; ++j) s += ch.a_over_source[static_cast<std::size_t>(j)] * xr[j];
      u[c] = s;
    }
    return u;
  }

  // gradient wrt the flat coupling
  Vec grad(const Vec& u) const {
    Vec g(static_cast<std::size_t>(m) * n, 0.0);
    const AlphaFamily& alpha = *prob->alpha;
    for (std::size_t c = 0; c < chs.size(); ++c) {
      const Ch& ch = chs[c];
      double d = ch.weight * alpha.deriv(std::max(0.0, u[c]));
      double* gr = g.data() + static_cast<std::size_t>(ch.row) * n;
      for (int j = 0; j < n; ++j) gr[j] += d * ch.a_over_source[static_cast<std::size_t>(j)];
    }
    return g;
  }
};

// Exact line search for a convex objective along u(g) = u0 + g*du on
// [0, gmax]; handles +inf values on the upper part of the segment.
double line_search_u(const WeakEval& ev, const Vec& u0, const Vec& du, double gmax) {
  const AlphaFamily& alpha = *ev.prob->alpha;
  auto fval = [&](double g) {
    double f = 0.0;
    for (std::size_t c = 0; c < ev.chs.size(); ++c) {
      double v = alpha(std::max(0.0, u0[c] + g * du[c]));
      if (std::isinf(v)) return kInf;
      f += ev.chs[c].weight * v;
    }
    return f;
  };
  auto fderiv = [&](double g) {
    double d = 0.0;
    for (std::size_t c = 0; c < ev.chs.size(); ++c)
      d += ev.chs[c].weight * alpha.deriv(std::max(0.0, u0[c] + g * du[c])) * du[c];
    return d;
  };
  double hi = gmax;
  if (std::isinf(fval(hi))) {
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (std::isinf(fval(mid)))
        hi = mid;
      else
        lo = mid;
    }
    hi = lo;
  }
  if (hi <= 0.0) return 0.0;
  if (fderiv(hi) <= 0.0) return hi;
  if (fderiv(0.0) >= 0.0) return 0.0;
  double lo = 0.0, up = hi;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + up);
    if (fderiv(mid) <= 0.0)
      lo = mid;
    else
      up = mid;
  }
  return lo;
}

}  // namespace

WeakResult minimize_weak(const WeakProblem& prob, double tol, int max_iter) {
  if (prob.alpha == nullptr) throw InputError("weak problem needs an alpha family");
  const int M = static_cast<int>(prob.source.size());
  const int N = static_cast<int>(prob.target.size());
  if (static_cast<int>(prob.channels.size()) != M)
    throw InputError("weak problem: one channel list per source row required");
  double ta = sum(prob.source), tb = sum(prob.target);
  if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::max(ta, tb)))
    throw InputError("weak problem: marginals must share total mass");

  WeakResult out;
  out.coupling.assign(static_cast<std::size_t>(M), Vec(static_cast<std::size_t>(N), 0.0));
  if (ta <= 0.0) {
    out.gap = 0.0;
    out.residual = 0.0;
    out.converged = true;
    return out;
  }

  std::vector<int> rows, cols;
  for (int i = 0; i < M; ++i)
    if (prob.source[static_cast<std::size_t>(i)] > 0.0) rows.push_back(i);
  for (int j = 0; j < N; ++j)
    if (prob.target[static_cast<std::size_t>(j)] > 0.0) cols.push_back(j);
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(cols.size());

  Vec a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i)] = prob.source[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
  for (int j = 0; j < n; ++j) b[static_cast<std::size_t>(j)] = prob.target[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])] * (ta / tb);

  WeakEval ev;
  ev.prob = &prob;
  ev.m = m;
  ev.n = n;
  const AlphaFamily& alpha = *prob.alpha;
  for (int i = 0; i < m; ++i) {
    int orig = rows[static_cast<std::size_t>(i)];
    for (const WeakChannel& ch : prob.channels[static_cast<std::size_t>(orig)]) {
      if (ch.weight == 0.0) continue;
      if (static_cast<int>(ch.a.size()) != N)
        throw InputError("weak channel vector length must match target size");
      WeakEval::Ch c;
      c.row = i;
      c.weight = ch.weight;
      c.a_over_source.resize(static_cast<std::size_t>(n));
      double lo = kInf, hi = -kInf;
      for (int j = 0; j < n; ++j) {
        double av = ch.a[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])];
        if (av < -1e-12) throw InputError("weak channel values must be nonnegative");
        lo = std::min(lo, av);
        hi = std::max(hi, av);
        c.a_over_source[static_cast<std::size_t>(j)] = av / a[static_cast<std::size_t>(i)];
      }
      if (hi > alpha.max_domain() + 1e-9)
        throw InputError("weak channel values exceed the alpha domain");
      if (hi - lo <= 1e-15) {
        double v = alpha(std::max(0.0, lo));
        ev.constant_term += std::isinf(v) ? kInf : c.weight * v;
        continue;
      }
      c.lo = lo;
      c.hi = hi;
      // rescale a to plain values; u uses a/source so fold now
      ev.chs.push_back(std::move(c));
    }
  }

  auto fill_output = [&](const Vec& x) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        out.coupling[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])]
                    [static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])] =
            x[static_cast<std::size_t>(i) * n + j];
    double res = 0.0;
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += x[static_cast<std::size_t>(i) * n + j];
      res = std::max(res, std::abs(s - a[static_cast<std::size_t>(i)]));
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += x[static_cast<std::size_t>(i) * n + j];
      res = std::max(res, std::abs(s - b[static_cast<std::size_t>(j)]));
    }
    out.residual = res;
  };

  // independent coupling (always feasible; interior wrt every channel)
  Vec indep(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      indep[static_cast<std::size_t>(i) * n + j] =
          a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] / ta;

  if (std::isinf(ev.constant_term) || ev.chs.empty()) {
    // value is constant over the polytope
    fill_output(indep);
    out.value = std::isinf(ev.constant_term) ? kInf : ev.value_at_u(ev.u_of(indep));
    out.gap = 0.0;
    out.converged = true;
    return out;
  }

  // starting atom: a vertex that keeps channel averages low, falling back to
  // the independent coupling when that vertex is infeasible for alpha
  Vec x;
  {
    Mat agg(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(n), 0.0));
    for (const auto& ch : ev.chs)
      for (int j = 0; j < n; ++j)
        agg[static_cast<std::size_t>(ch.row)][static_cast<std::size_t>(j)] +=
            ch.weight * ch.a_over_source[static_cast<std::size_t>(j)];
    OtResult v0 = ot_solve(agg, a, b);
    Vec flat(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) flat[static_cast<std::size_t>(i) * n + j] = v0.plan[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    x = std::isinf(ev.value_at_u(ev.u_of(flat))) ? indep : flat;
  }

  std::vector<Vec> atoms{x};
  Vec lambda{1.0};
  Vec u = ev.u_of(x);
  double fx = ev.value_at_u(u);
  double best_gap = kInf;

  auto find_atom = [&](const Vec& s) -> int {
    for (std::size_t t = 0; t < atoms.size(); ++t) {
      double d = 0.0;
      for (std::size_t q = 0; q < s.size(); ++q) d = std::max(d, std::abs(atoms[t][q] - s[q]));
      if (d <= 1e-13) return static_cast<int>(t);
    }
    return -1;
  };

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Vec g = ev.grad(u);
    double gmax = max_abs(g);
    if (gmax <= 0.0) {
      best_gap = 0.0;
      break;
    }
    Mat gm(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) gm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g[static_cast<std::size_t>(i) * n + j] / gmax;
    OtResult lmo = ot_solve(gm, a, b);
    Vec s(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(i) * n + j] = lmo.plan[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    double gap = flat_dot(g, x) - flat_dot(g, s);
    best_gap = std::min(best_gap, gap);
    if (gap <= tol) break;

    // away atom
    int away = 0;
    double worst = -kInf;
    for (std::size_t t = 0; t < atoms.size(); ++t) {
      if (lambda[t] <= 0.0) continue;
      double val = flat_dot(g, atoms[t]);
      if (val > worst) {
        worst = val;
        away = static_cast<int>(t);
      }
    }

    bool pairwise = (iter % 8 != 7) && lambda[static_cast<std::size_t>(away)] > 1e-14;
    Vec dir(x.size());
    double gmax_step;
    if (pairwise) {
      for (std::size_t q = 0; q < x.size(); ++q) dir[q] = s[q] - atoms[static_cast<std::size_t>(away)][q];
      gmax_step = lambda[static_cast<std::size_t>(away)];
    } else {
      for (std::size_t q = 0; q < x.size(); ++q) dir[q] = s[q] - x[q];
      gmax_step = 1.0;
    }
    Vec du(ev.chs.size(), 0.0);
    for (std::size_t c = 0; c < ev.chs.size(); ++c) {
      const auto& ch = ev.chs[c];
      double sd = 0.0;
      const double* dr = dir.data() + static_cast<std::size_t>(ch.row) * n;
      for (int j = 0; j < n; ++j) sd += ch.a_over_source[static_cast<std::size_t>(j)] * dr[j];
      du[c] = sd;
    }
    double step = line_search_u(ev, u, du, gmax_step);
    if (step <= 0.0) {
      if (pairwise) continue;  // try a plain step next round
      break;                   // no descent along the FW direction: numerically stuck
    }

    int s_idx = find_atom(s);
    if (s_idx < 0) {
      atoms.push_back(s);
      lambda.push_back(0.0);
      s_idx = static_cast<int>(atoms.size()) - 1;
    }
    if (pairwise) {
      lambda[static_cast<std::size_t>(away)] -= step;
      lambda[static_cast<std::size_t>(s_idx)] += step;
    } else {
      for (double& l : lambda) l *= (1.0 - step);
      lambda[static_cast<std::size_t>(s_idx)] += step;
    }
    for (std::size_t q = 0; q < x.size(); ++q) x[q] += step * dir[q];
    for (std::size_t c = 0; c < ev.chs.size(); ++c) u[c] = std::max(0.0, u[c] + step * du[c]);

    // periodic cleanup against drift
    if (iter % 64 == 63) {
      for (std::size_t t = atoms.size(); t-- > 0;) {
        if (lambda[t] < 1e-15 && atoms.size() > 1) {
          atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(t));
          lambda.erase(lambda.begin() + static_cast<std::ptrdiff_t>(t));
        }
      }
      double lsum = sum(lambda);
      if (lsum > 0) {
        for (double& l : lambda) l /= lsum;
      }
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t t = 0; t < atoms.size(); ++t)
        for (std::size_t q = 0; q < x.size(); ++q) x[q] += lambda[t] * atoms[t][q];
      u = ev.u_of(x);
    }
  }

  u = ev.u_of(x);
  fx = ev.value_at_u(u);
  fill_output(x);
  out.value = fx;
  out.gap = best_gap;
  out.iterations = iter;
  out.converged = best_gap <= tol;
  if (!out.converged)
    throw SolverFailure("weak transport solver did not reach its gap tolerance", fx, best_gap,
                        out.residual);
  return out;
}

SimplexResult minimize_on_simplex(const SimplexObjective& obj, double tol, int max_iter,
                                  int start_index) {
  const int n = obj.dim;
  if (n < 1) throw InputError("simplex objective needs dim >= 1");
  if (!obj.linear.empty() && static_cast<int>(obj.linear.size()) != n)
    throw InputError("simplex objective: linear size mismatch");
  for (const auto& ch : obj.channels)
    if (static_cast<int>(ch.a.size()) != n)
      throw InputError("simplex objective: channel size mismatch");
  if (!obj.channels.empty() && obj.alpha == nullptr)
    throw InputError("simplex objective with channels needs an alpha family");

  auto fval_u = [&](const Vec& w, const Vec& u) {
    double f = 0.0;
    if (!obj.linear.empty()) f += flat_dot(obj.linear, w);
    for (std::size_t c = 0; c < obj.channels.size(); ++c) {
      double v = (*obj.alpha)(std::max(0.0, u[c]));
      if (std::isinf(v)) return kInf;
      f += obj.channels[c].weight * v;
    }
    return f;
  };
  auto u_of = [&](const Vec& w) {
    Vec u(obj.channels.size(), 0.0);
    for (std::size_t c = 0; c < obj.channels.size(); ++c) u[c] = flat_dot(obj.channels[c].a, w);
    return u;
  };
  auto grad = [&](const Vec& u) {
    Vec g(static_cast<std::size_t>(n), 0.0);
    if (!obj.linear.empty()) g = obj.linear;
    for (std::size_t c = 0; c < obj.channels.size(); ++c) {
      double d = obj.channels[c].weight * obj.alpha->deriv(std::max(0.0, u[c]));
      for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] += d * obj.channels[c].a[static_cast<std::size_t>(j)];
    }
    return g;
  };

  SimplexResult out;
  out.w.assign(static_cast<std::size_t>(n), 0.0);

  int start = start_index;
  if (start < 0) {
    double best = kInf;
    for (int j = 0; j < n; ++j) {
      Vec e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(j)] = 1.0;
      double f = fval_u(e, u_of(e));
      if (f < best) {
        best = f;
        start = j;
      }
    }
    if (start < 0) start = 0;
  }
  Vec w(static_cast<std::size_t>(n), 0.0);
  w[static_cast<std::size_t>(start)] = 1.0;
  Vec u = u_of(w);
  double fw = fval_u(w, u);
  if (std::isinf(fw)) throw SolverFailure("simplex solver started at an infinite vertex", fw, kInf, 0.0);

  double best_gap = kInf;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Vec g = grad(u);
    int to = 0;
    for (int j = 1; j < n; ++j)
      if (g[static_cast<std::size_t>(j)] < g[static_cast<std::size_t>(to)]) to = j;
    double gap = flat_dot(g, w) - g[static_cast<std::size_t>(to)];
    best_gap = std::min(best_gap, gap);
    if (gap <= tol) break;

    int away = -1;
    double worst = -kInf;
    for (int j = 0; j < n; ++j)
      if (w[static_cast<std::size_t>(j)] > 0.0 && g[static_cast<std::size_t>(j)] > worst) {
        worst = g[static_cast<std::size_t>(j)];
        away = j;
      }

    bool pairwise = (iter % 8 != 7) && away >= 0 && away != to;
    Vec du(obj.channels.size(), 0.0);
    double step_max, dlin_term = 0.0;
    if (pairwise) {
      step_max = w[static_cast<std::size_t>(away)];
      for (std::size_t c = 0; c < obj.channels.size(); ++c)
        du[c] = obj.channels[c].a[static_cast<std::size_t>(to)] - obj.channels[c].a[static_cast<std::size_t>(away)];
      if (!obj.linear.empty())
        dlin_term = obj.linear[static_cast<std::size_t>(to)] - obj.linear[static_cast<std::size_t>(away)];
    } else {
      step_max = 1.0;
      for (std::size_t c = 0; c < obj.channels.size(); ++c)
        du[c] = obj.channels[c].a[static_cast<std::size_t>(to)] - u[c];
      if (!obj.linear.empty()) dlin_term = obj.linear[static_cast<std::size_t>(to)] - flat_dot(obj.linear, w);
    }

    auto f1 = [&](double t) {
      double f = dlin_term * t;
      for (std::size_t c = 0; c < obj.channels.size(); ++c) {
        double v = (*obj.alpha)(std::max(0.0, u[c] + t * du[c]));
        if (std::isinf(v)) return kInf;
        f += obj.channels[c].weight * v;
      }
      return f;
    };
    auto f1d = [&](double t) {
      double d = dlin_term;
      for (std::size_t c = 0; c < obj.channels.size(); ++c)
        d += obj.channels[c].weight * obj.alpha->deriv(std::max(0.0, u[c] + t * du[c])) * du[c];
      return d;
    };
    double hi = step_max;
    if (std::isinf(f1(hi))) {
      double lo = 0.0;
      for (int it2 = 0; it2 < 60; ++it2) {
        double mid = 0.5 * (lo + hi);
        if (std::isinf(f1(mid)))
          hi = mid;
        else
          lo = mid;
      }
      hi = lo;
    }
    double step = 0.0;
    if (hi > 0.0) {
      if (f1d(hi) <= 0.0)
        step = hi;
      else if (f1d(0.0) >= 0.0)
        step = 0.0;
      else {
        double lo = 0.0, up = hi;
        for (int it2 = 0; it2 < 80; ++it2) {
          double mid = 0.5 * (lo + up);
          if (f1d(mid) <= 0.0)
            lo = mid;
          else
            up = mid;
        }
        step = lo;
      }
    }
    if (step <= 0.0) {
      if (pairwise) continue;
      break;
    }
    if (pairwise) {
      w[static_cast<std::size_t>(away)] -= step;
      w[static_cast<std::size_t>(to)] += step;
    } else {
      for (double& x : w) x *= (1.0 - step);
      w[static_cast<std::size_t>(to)] += step;
    }
    for (std::size_t c = 0; c < obj.channels.size(); ++c) u[c] = std::max(0.0, u[c] + step * du[c]);
    if (iter % 128 == 127) {
      double tot = sum(w);
      for (double& x : w) x = std::max(0.0, x) / tot;
      u = u_of(w);
    }
  }

  u = u_of(w);
  out.w = w;
  out.value = fval_u(w, u);
  out.gap = best_gap;
  out.iterations = iter;
  out.converged = best_gap <= tol;
  if (!out.converged)
    throw SolverFailure("simplex solver did not reach its gap tolerance", out.value, best_gap, 0.0);
  return out;
}

}  // namespace ppt
