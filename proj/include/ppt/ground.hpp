#pragma once

#include <string>
#include <vector>

#include "ppt/numeric.hpp"

#include "json.hpp"

namespace ppt {

using Point = std::vector<double>;

enum class SpaceKind { finite, euclidean };

// The base space Z: either a finite labeled metric space (with the full
// k x k distance matrix) or an axis-aligned box in R^d.
class GroundSpace {
 public:
  static GroundSpace finite(std::vector<std::string> labels, Mat metric);
  static GroundSpace euclidean(std::vector<std::pair<double, double>> box);
  static GroundSpace from_json(const nlohmann::json& j);

  SpaceKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == SpaceKind::finite; }

  int size() const;  // finite spaces only
  const std::vector<std::string>& labels() const { return labels_; }
  double metric(int i, int j) const;
  const Mat& metric_matrix() const { return metric_; }

  int dimension() const;  // euclidean spaces only
  const std::vector<std::pair<double, double>>& box() const { return box_; }
  double box_volume() const;

 private:
  GroundSpace() = default;
  SpaceKind kind_ = SpaceKind::finite;
  std::vector<std::string> labels_;
  Mat metric_;
  std::vector<std::pair<double, double>> box_;
};

enum class CostKind { hamming, squared_distance, distance_power, custom_matrix };

// Base cost omega / rho on pairs of ground points, values in [0, inf].
class CostFunction {
 public:
  static CostFunction hamming();
  static CostFunction squared_distance();
  static CostFunction distance_power(double k);
  static CostFunction custom(Mat matrix);

  CostKind kind() const { return kind_; }

  // Cost between two points of a finite space.
  double on_indices(const GroundSpace& space, int i, int j) const;
  // Full matrix on a finite space.
  Mat matrix(const GroundSpace& space) const;
  // Cost between two euclidean points (hamming compares coordinates exactly).
  double on_points(const Point& x, const Point& y) const;

 private:
  CostKind kind_ = CostKind::hamming;
  double power_ = 1.0;
  Mat custom_;
};

// ---- scalar convex families ----

// Dembo's interpolation family on [0,1]; t in {0,1} uses the limit formulas
//   alpha_0(u) = (1-u)log(1-u) + u,   alpha_1(u) = -u - log(1-u).
double alpha_t(double t, double u);
double alpha_t_deriv(double t, double u);

// Legendre conjugate of alpha_1: s - log(1+s) for s >= 0.
double alpha1_conjugate(double s);

// phi_lambda(s) = s/(1-lambda) - lambda/(1-lambda) log(1 + s/lambda),
// phi_0(s) = s; Wu's function phi_w(s) = e^{-s} + s - 1.
double phi_lambda(double lambda, double s);
double phi_wu(double s);

enum class AlphaKind { dembo, square, half_square, custom_convex };

// A convex nondecreasing function with value 0 at 0, used as the outer
// function of weak (barycentric) transport costs. Construction validates the
// shape claims with a finite-difference test on a grid.
class AlphaFamily {
 public:
  static AlphaFamily dembo(double t);
  static AlphaFamily square();
  static AlphaFamily half_square();
  // Samples (u_i, v_i) with linear interpolation between them; u grid must
  // start at 0 and be strictly increasing.
  static AlphaFamily custom_convex(Vec us, Vec vals);

  AlphaKind kind() const { return kind_; }
  double dembo_t() const { return t_; }

  // Largest admissible argument (1 for dembo/custom, +inf for squares).
  double max_domain() const;

  double operator()(double u) const;
  // One-sided derivative; where the true derivative diverges (u == 1 for the
  // dembo family) a large finite cap is returned so solvers can keep going.
  double deriv(double u) const;

 private:
  AlphaFamily() = default;
  void validate_shape() const;

  AlphaKind kind_ = AlphaKind::square;
  double t_ = 0.0;
  Vec us_, vals_;
};

}  // namespace ppt
