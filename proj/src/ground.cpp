#include "ppt/ground.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace ppt {

GroundSpace GroundSpace::finite(std::vector<std::string> labels, Mat metric) {
  const std::size_t k = labels.size();
  if (k == 0) throw InputError("finite space needs at least one point");
  if (metric.size() != k) throw InputError("metric size does not match label count");
  for (const auto& row : metric)
    if (row.size() != k) throw InputError("metric matrix is not square");
  const double tol = 1e-12;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(metric[i][i]) > tol) throw InputError("metric diagonal must be zero");
    for (std::size_t j = 0; j < k; ++j) {
      if (metric[i][j] < 0.0) throw InputError("metric entries must be nonnegative");
      if (std::abs(metric[i][j] - metric[j][i]) > tol) throw InputError("metric must be symmetric");
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l)
        if (metric[i][j] > metric[i][l] + metric[l][j] + 1e-12)
          throw InputError("metric violates the triangle inequality");
  GroundSpace g;
  g.kind_ = SpaceKind::finite;
  g.labels_ = std::move(labels);
  g.metric_ = std::move(metric);
  return g;
}

GroundSpace GroundSpace::euclidean(std::vector<std::pair<double, double>> box) {
  if (box.empty()) throw InputError("euclidean space needs dimension >= 1");
  for (auto& [lo, hi] : box)
    if (!(lo < hi)) throw InputError("box bounds must satisfy lo < hi");
  GroundSpace g;
  g.kind_ = SpaceKind::euclidean;
  g.box_ = std::move(box);
  return g;
}

GroundSpace GroundSpace::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("metric"))
    throw InputError("finite space json needs {labels, metric}");
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  Mat metric = j.at("metric").get<Mat>();
  return finite(std::move(labels), std::move(metric));
}

int GroundSpace::size() const {
  if (kind_ != SpaceKind::finite) throw InputError("size() requires a finite space");
  return static_cast<int>(labels_.size());
}

double GroundSpace::metric(int i, int j) const {
  if (kind_ != SpaceKind::finite) throw InputError("metric() requires a finite space");
  return metric_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

int GroundSpace::dimension() const {
  if (kind_ != SpaceKind::euclidean) throw InputError("dimension() requires a euclidean space");
  return static_cast<int>(box_.size());
}

double GroundSpace::box_volume() const {
  if (kind_ != SpaceKind::euclidean) throw InputError("box_volume() requires a euclidean space");
  double v = 1.0;
  for (auto& [lo, hi] : box_) v *= hi - lo;
  return v;
}

CostFunction CostFunction::hamming() {
  CostFunction c;
  c.kind_ = CostKind::hamming;
  return c;
}

CostFunction CostFunction::squared_distance() {
  CostFunction c;
  c.kind_ = CostKind::squared_distance;
  c.power_ = 2.0;
  return c;
}

CostFunction CostFunction::distance_power(double k) {
  if (k <= 0.0) throw InputError("distance_power requires k > 0");
  CostFunction c;
  c.kind_ = CostKind::distance_power;
  c.power_ = k;
  return c;
}

CostFunction CostFunction::custom(Mat matrix) {
  for (const auto& row : matrix)
    for (double x : row)
      if (x < 0.0) throw InputError("custom cost matrix must be nonnegative");
  CostFunction c;
  c.kind_ = CostKind::custom_matrix;
  c.custom_ = std::move(matrix);
  return c;
}

double CostFunction::on_indices(const GroundSpace& space, int i, int j) const {
  switch (kind_) {
    case CostKind::hamming:
      return i == j ? 0.0 : 1.0;
    case CostKind::squared_distance:
    case CostKind::distance_power: {
      double d = space.metric(i, j);
      return power_ == 1.0 ? d : std::pow(d, power_);
    }
    case CostKind::custom_matrix: {
      auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
      if (ii >= custom_.size() || jj >= custom_[ii].size())
        throw InputError("custom cost matrix too small for this space");
      return custom_[ii][jj];
    }
  }
  return 0.0;
}

Mat CostFunction::matrix(const GroundSpace& space) const {
  int k = space.size();
  Mat m(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(k), 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[i][j] = on_indices(space, i, j);
  return m;
}

double CostFunction::on_points(const Point& x, const Point& y) const {
  if (x.size() != y.size()) throw InputError("points have mismatched dimensions");
  if (kind_ == CostKind::hamming) return x == y ? 0.0 : 1.0;
  if (kind_ == CostKind::custom_matrix)
    throw InputError("custom cost matrices apply to finite spaces only");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  double d = std::sqrt(d2);
  return power_ == 1.0 ? d : std::pow(d, power_);
}

// ---- scalar families ----

namespace {
constexpr double kLimitEps = 1e-9;
constexpr double kDerivCap = 1e30;
}  // namespace

double alpha_t(double t, double u) {
  if (t < 0.0 || t > 1.0) throw InputError("alpha_t: t must lie in [0,1]");
  if (u < 0.0 || u > 1.0 + 1e-12) throw InputError("alpha_t: u must lie in [0,1]");
  u = std::min(u, 1.0);
  if (t >= 1.0 - kLimitEps) {
    if (u >= 1.0) return kInf;
    return -u - std::log1p(-u);
  }
  if (t <= kLimitEps) return xlogx(1.0 - u) + u;
  return (t * xlogx(1.0 - u) - xlogx(1.0 - t * u)) / (t * (1.0 - t));
}

double alpha_t_deriv(double t, double u) {
  if (u < 0.0 || u > 1.0 + 1e-12) throw InputError("alpha_t_deriv: u must lie in [0,1]");
  u = std::min(u, 1.0);
  if (t >= 1.0 - kLimitEps) {
    if (u >= 1.0) return kDerivCap;
    return u / (1.0 - u);
  }
  if (u >= 1.0) return kDerivCap;
  if (t <= kLimitEps) return -std::log1p(-u);
  return std::log((1.0 - t * u) / (1.0 - u)) / (1.0 - t);
}

double alpha1_conjugate(double s) {
  if (s < 0.0) throw InputError("alpha1_conjugate: s must be nonnegative");
  return s - std::log1p(s);
}

double phi_lambda(double lambda, double s) {
  if (lambda < 0.0 || lambda >= 1.0) throw InputError("phi_lambda: lambda must lie in [0,1)");
  if (s < 0.0) throw InputError("phi_lambda: s must be nonnegative");
  if (lambda == 0.0) return s;
  return s / (1.0 - lambda) - lambda / (1.0 - lambda) * std::log1p(s / lambda);
}

double phi_wu(double s) {
  if (s < 0.0) throw InputError("phi_wu: s must be nonnegative");
  return std::expm1(-s) + s;
}

AlphaFamily AlphaFamily::dembo(double t) {
  if (t < 0.0 || t > 1.0) throw InputError("dembo family: t must lie in [0,1]");
  AlphaFamily a;
  a.kind_ = AlphaKind::dembo;
  a.t_ = t;
  a.validate_shape();
  return a;
}

AlphaFamily AlphaFamily::square() {
  AlphaFamily a;
  a.kind_ = AlphaKind::square;
  a.validate_shape();
  return a;
}

AlphaFamily AlphaFamily::half_square() {
  AlphaFamily a;
  a.kind_ = AlphaKind::half_square;
  a.validate_shape();
  return a;
}

AlphaFamily AlphaFamily::custom_convex(Vec us, Vec vals) {
  if (us.size() != vals.size() || us.size() < 2)
    throw InputError("custom alpha needs matching sample vectors with >= 2 points");
  if (us.front() != 0.0) throw InputError("custom alpha grid must start at 0");
  for (std::size_t i = 1; i < us.size(); ++i)
    if (us[i] <= us[i - 1]) throw InputError("custom alpha grid must be strictly increasing");
  AlphaFamily a;
  a.kind_ = AlphaKind::custom_convex;
  a.us_ = std::move(us);
  a.vals_ = std::move(vals);
  a.validate_shape();
  return a;
}

double AlphaFamily::max_domain() const {
  switch (kind_) {
    case AlphaKind::dembo:
      return 1.0;
    case AlphaKind::square:
    case AlphaKind::half_square:
      return kInf;
    case AlphaKind::custom_convex:
      return us_.back();
  }
  return 1.0;
}

double AlphaFamily::operator()(double u) const {
  if (u < 0.0) {
    if (u < -1e-12) throw InputError("alpha: argument must be nonnegative");
    u = 0.0;
  }
  switch (kind_) {
    case AlphaKind::dembo:
      return alpha_t(t_, u);
    case AlphaKind::square:
      return u * u;
    case AlphaKind::half_square:
      return 0.5 * u * u;
    case AlphaKind::custom_convex: {
      if (u > us_.back() + 1e-12) throw InputError("alpha: argument outside sampled domain");
      u = std::min(u, us_.back());
      auto it = std::upper_bound(us_.begin(), us_.end(), u);
      std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - us_.begin()), us_.size() - 1);
      std::size_t lo = hi - 1;
      double w = (u - us_[lo]) / (us_[hi] - us_[lo]);
      return (1.0 - w) * vals_[lo] + w * vals_[hi];
    }
  }
  return 0.0;
}

double AlphaFamily::deriv(double u) const {
  u = std::max(u, 0.0);
  switch (kind_) {
    case AlphaKind::dembo:
      return alpha_t_deriv(t_, u);
    case AlphaKind::square:
      return 2.0 * u;
    case AlphaKind::half_square:
      return u;
    case AlphaKind::custom_convex: {
      u = std::min(u, us_.back());
      auto it = std::upper_bound(us_.begin(), us_.end(), u);
      std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - us_.begin()), us_.size() - 1);
      std::size_t lo = hi - 1;
      return (vals_[hi] - vals_[lo]) / (us_[hi] - us_[lo]);
    }
  }
  return 0.0;
}

void AlphaFamily::validate_shape() const {
  // Convexity, monotonicity and alpha(0) = 0 are claims; check them on a grid.
  const int n = 101;
  const double hi = std::min(max_domain(), 1.0);
  Vec vals(n);
  for (int i = 0; i < n; ++i) {
    double u = hi * i / (n - 1);
    if (kind_ == AlphaKind::dembo && t_ >= 1.0 - kLimitEps && i == n - 1) u = 1.0 - 1e-6;
    vals[static_cast<std::size_t>(i)] = (*this)(u);
  }
  if (std::abs(vals[0]) > 1e-12) throw InputError("alpha must vanish at 0");
  for (int i = 1; i < n; ++i) {
    if (vals[i] < vals[i - 1] - 1e-12) throw InputError("alpha must be nondecreasing");
    if (vals[i] < -1e-12) throw InputError("alpha must be nonnegative");
  }
  for (int i = 1; i + 1 < n; ++i)
    if (vals[i + 1] + vals[i - 1] - 2.0 * vals[i] < -1e-9)
      throw InputError("alpha failed the finite-difference convexity test");
}

}  // namespace ppt
