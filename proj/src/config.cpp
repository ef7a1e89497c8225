#include "ppt/config.hpp"

#include <algorithm>
#include <map>

namespace ppt {

Configuration Configuration::from_counts(std::vector<int> counts) {
  Configuration c;
  c.finite_ = true;
  c.mass_ = 0;
  for (int x : counts) {
    if (x < 0) throw InputError("configuration counts must be nonnegative");
    c.mass_ += x;
  }
  c.counts_ = std::move(counts);
  return c;
}

Configuration Configuration::empty_finite(int ground_size) {
  return from_counts(std::vector<int>(static_cast<std::size_t>(ground_size), 0));
}

Configuration Configuration::from_points(std::vector<Point> points) {
  Configuration c;
  c.finite_ = false;
  std::map<Point, int> mult;
  for (auto& p : points) {
    if (p.empty()) throw InputError("euclidean points need dimension >= 1");
    if (c.dim_ == 0)
      c.dim_ = static_cast<int>(p.size());
    else if (static_cast<int>(p.size()) != c.dim_)
      throw InputError("all points of a configuration must share a dimension");
    ++mult[p];
  }
  for (auto& [p, m] : mult) {
    c.atoms_.emplace_back(p, m);
    c.mass_ += m;
  }
  return c;
}

Configuration Configuration::empty_euclidean(int dimension) {
  Configuration c;
  c.finite_ = false;
  c.dim_ = dimension;
  return c;
}

int Configuration::ground_size() const {
  if (!finite_) throw InputError("ground_size() requires a finite-mode configuration");
  return static_cast<int>(counts_.size());
}

bool Configuration::simple() const {
  if (finite_) {
    for (int x : counts_)
      if (x > 1) return false;
    return true;
  }
  for (auto& [p, m] : atoms_)
    if (m > 1) return false;
  return true;
}

int Configuration::count(int index) const {
  if (!finite_) throw InputError("index counts require a finite-mode configuration");
  if (index < 0 || index >= static_cast<int>(counts_.size()))
    throw InputError("atom index out of range");
  return counts_[static_cast<std::size_t>(index)];
}

int Configuration::count(const Point& p) const {
  if (finite_) throw InputError("point counts require a euclidean-mode configuration");
  for (auto& [q, m] : atoms_)
    if (q == p) return m;
  return 0;
}

const std::vector<int>& Configuration::counts() const {
  if (!finite_) throw InputError("counts() requires a finite-mode configuration");
  return counts_;
}

const std::vector<std::pair<Point, int>>& Configuration::atoms() const {
  if (finite_) throw InputError("atoms() requires a euclidean-mode configuration");
  return atoms_;
}

Configuration Configuration::adding(int index) const {
  std::vector<int> c = counts();
  if (index < 0 || index >= static_cast<int>(c.size()))
    throw InputError("atom index out of range");
  ++c[static_cast<std::size_t>(index)];
  return from_counts(std::move(c));
}

Configuration Configuration::adding(const Point& p) const {
  if (finite_) throw InputError("adding a point requires a euclidean-mode configuration");
  Configuration c = *this;
  c.mass_ += 1;
  auto it = std::lower_bound(c.atoms_.begin(), c.atoms_.end(), p,
                             [](const auto& a, const Point& q) { return a.first < q; });
  if (it != c.atoms_.end() && it->first == p)
    ++it->second;
  else
    c.atoms_.insert(it, {p, 1});
  return c;
}

Configuration Configuration::removing(int index) const {
  std::vector<int> c = counts();
  if (index < 0 || index >= static_cast<int>(c.size()))
    throw InputError("atom index out of range");
  if (c[static_cast<std::size_t>(index)] < 1)
    throw InputError("cannot remove a point absent from the configuration");
  --c[static_cast<std::size_t>(index)];
  return from_counts(std::move(c));
}

Configuration Configuration::removing(const Point& p) const {
  if (finite_) throw InputError("removing a point requires a euclidean-mode configuration");
  Configuration c = *this;
  auto it = std::lower_bound(c.atoms_.begin(), c.atoms_.end(), p,
                             [](const auto& a, const Point& q) { return a.first < q; });
  if (it == c.atoms_.end() || !(it->first == p))
    throw InputError("cannot remove a point absent from the configuration");
  c.mass_ -= 1;
  if (--it->second == 0) c.atoms_.erase(it);
  return c;
}

std::vector<int> Configuration::expand_indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(mass_));
  const auto& c = counts();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int r = 0; r < c[i]; ++r) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<Point> Configuration::expand_points() const {
  if (finite_) throw InputError("expand_points() requires a euclidean-mode configuration");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(mass_));
  for (auto& [p, m] : atoms_)
    for (int r = 0; r < m; ++r) out.push_back(p);
  return out;
}

bool Configuration::operator==(const Configuration& o) const {
  if (finite_ != o.finite_) return false;
  return finite_ ? counts_ == o.counts_ : atoms_ == o.atoms_;
}

bool Configuration::operator<(const Configuration& o) const {
  if (finite_ != o.finite_) return finite_ && !o.finite_;
  return finite_ ? counts_ < o.counts_ : atoms_ < o.atoms_;
}

Configuration setminus(const Configuration& xi, const Configuration& chi) {
  if (xi.finite_mode() != chi.finite_mode())
    throw InputError("setminus requires configurations on the same ground space");
  if (xi.finite_mode()) {
    if (xi.ground_size() != chi.ground_size())
      throw InputError("setminus requires configurations on the same ground space");
    std::vector<int> out(xi.counts());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(0, out[i] - chi.counts()[i]);
    return Configuration::from_counts(std::move(out));
  }
  std::vector<Point> pts;
  for (auto& [p, m] : xi.atoms()) {
    int keep = std::max(0, m - chi.count(p));
    for (int r = 0; r < keep; ++r) pts.push_back(p);
  }
  if (pts.empty()) return Configuration::empty_euclidean(xi.dimension());
  return Configuration::from_points(std::move(pts));
}

bool dominated_by(const Configuration& chi, const Configuration& xi) {
  return setminus(chi, xi).empty();
}

double diff_minus(const Functional& f, const Configuration& xi, int x) {
  if (xi.count(x) < 1) throw InputError("diff_minus: point not present in the configuration");
  return f(xi) - f(xi.removing(x));
}

double diff_minus(const Functional& f, const Configuration& xi, const Point& x) {
  if (xi.count(x) < 1) throw InputError("diff_minus: point not present in the configuration");
  return f(xi) - f(xi.removing(x));
}

double diff_plus(const Functional& f, const Configuration& xi, int x) {
  return f(xi.adding(x)) - f(xi);
}

double diff_plus(const Functional& f, const Configuration& xi, const Point& x) {
  return f(xi.adding(x)) - f(xi);
}

namespace {

template <typename PointT>
double u_statistic_impl(int q, const std::function<double(const std::vector<PointT>&)>& h,
                        const std::vector<PointT>& pts) {
  int n = static_cast<int>(pts.size());
  if (q < 1) throw InputError("u_statistic requires q >= 1");
  if (n < q) return 0.0;
  std::vector<int> idx(static_cast<std::size_t>(q), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<PointT> args(static_cast<std::size_t>(q));
  double total = 0.0;
  // iterate over ordered q-tuples of distinct indices
  int depth = 0;
  while (depth >= 0) {
    int& i = idx[static_cast<std::size_t>(depth)];
    if (i >= 0) used[static_cast<std::size_t>(i)] = 0;
    ++i;
    while (i < n && used[static_cast<std::size_t>(i)]) ++i;
    if (i >= n) {
      i = -1;
      --depth;
      continue;
    }
    used[static_cast<std::size_t>(i)] = 1;
    args[static_cast<std::size_t>(depth)] = pts[static_cast<std::size_t>(i)];
    if (depth == q - 1) {
      total += h(args);
    } else {
      ++depth;
    }
  }
  return total;
}

}  // namespace

double u_statistic(int q, const std::function<double(const std::vector<int>&)>& h,
                   const Configuration& xi) {
  return u_statistic_impl<int>(q, h, xi.expand_indices());
}

double u_statistic(int q, const std::function<double(const std::vector<Point>&)>& h,
                   const Configuration& xi) {
  return u_statistic_impl<Point>(q, h, xi.expand_points());
}

Functional make_u_statistic_functional(int q,
                                       std::function<double(const std::vector<int>&)> h) {
  Functional f;
  f.eval = [q, h = std::move(h)](const Configuration& xi) { return u_statistic(q, h, xi); };
  f.claims_nondecreasing = true;
  f.claims_convex = true;
  return f;
}

Functional make_euclidean_u_statistic_functional(
    int q, std::function<double(const std::vector<Point>&)> h) {
  Functional f;
  f.eval = [q, h = std::move(h)](const Configuration& xi) { return u_statistic(q, h, xi); };
  f.claims_nondecreasing = true;
  f.claims_convex = true;
  return f;
}

std::vector<std::vector<int>> enumerate_count_vectors(int k, int mass_cap) {
  if (k < 1) throw InputError("enumeration requires k >= 1");
  if (mass_cap < 0) throw InputError("enumeration requires mass_cap >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  // by total mass, then lexicographically within each mass slice
  for (int n = 0; n <= mass_cap; ++n) {
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
      if (pos == k - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(cur);
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        cur[static_cast<std::size_t>(pos)] = c;
        rec(pos + 1, remaining - c);
      }
    };
    rec(0, n);
  }
  return out;
}

MonotoneConvexReport check_monotone_convex(const Functional& f, int ground_size, int mass_cap,
                                           double tol) {
  MonotoneConvexReport rep;
  auto domain = enumerate_count_vectors(ground_size, mass_cap);
  for (auto& counts : domain) {
    Configuration xi = Configuration::from_counts(counts);
    if (xi.total_mass() >= mass_cap) continue;
    for (int x = 0; x < ground_size; ++x) {
      double d = diff_plus(f, xi, x);
      if (d < -tol && rep.nondecreasing) {
        rep.nondecreasing = false;
        if (rep.first_violation.empty())
          rep.first_violation = "D+ negative at mass " + std::to_string(xi.total_mass());
      }
      if (xi.total_mass() + 2 <= mass_cap) {
        for (int y = 0; y < ground_size; ++y) {
          double dd = f(xi.adding(x).adding(y)) - f(xi.adding(x)) - f(xi.adding(y)) + f(xi);
          if (dd < -tol && rep.convex) {
            rep.convex = false;
            if (rep.first_violation.empty())
              rep.first_violation = "D+D+ negative at mass " + std::to_string(xi.total_mass());
          }
        }
      }
    }
  }
  return rep;
}

MonotoneConvexReport check_monotone_convex_sampled(const Functional& f,
                                                   const std::vector<Configuration>& samples,
                                                   const std::vector<Point>& extra_points,
                                                   double tol) {
  MonotoneConvexReport rep;
  for (const auto& xi : samples) {
    for (const auto& p : extra_points) {
      double d = diff_plus(f, xi, p);
      if (d < -tol) {
        rep.nondecreasing = false;
        if (rep.first_violation.empty()) rep.first_violation = "D+ negative (sampled)";
      }
      for (const auto& q : extra_points) {
        double dd = f(xi.adding(p).adding(q)) - f(xi.adding(p)) - f(xi.adding(q)) + f(xi);
        if (dd < -tol) {
          rep.convex = false;
          if (rep.first_violation.empty()) rep.first_violation = "D+D+ negative (sampled)";
        }
      }
    }
  }
  return rep;
}

}  // namespace ppt
