#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ppt/ground.hpp"
#include "ppt/numeric.hpp"

namespace ppt {

// A finite integer-multiplicity point measure. On a finite ground space the
// atoms are ground indices and the representation is a dense count vector;
// on a euclidean space it is a lexicographically sorted list of
// (point, multiplicity) pairs, so equality is structural.
class Configuration {
 public:
  static Configuration from_counts(std::vector<int> counts);
  static Configuration empty_finite(int ground_size);
  static Configuration from_points(std::vector<Point> points);
  static Configuration empty_euclidean(int dimension);

  bool finite_mode() const { return finite_; }
  int ground_size() const;
  int dimension() const { return dim_; }
  int total_mass() const { return mass_; }
  bool empty() const { return mass_ == 0; }
  bool simple() const;  // all multiplicities <= 1

  int count(int index) const;
  int count(const Point& p) const;
  const std::vector<int>& counts() const;
  const std::vector<std::pair<Point, int>>& atoms() const;

  Configuration adding(int index) const;
  Configuration adding(const Point& p) const;
  Configuration removing(int index) const;
  Configuration removing(const Point& p) const;

  // Point-list expansions in canonical order.
  std::vector<int> expand_indices() const;
  std::vector<Point> expand_points() const;

  bool operator==(const Configuration& o) const;
  bool operator<(const Configuration& o) const;

 private:
  bool finite_ = true;
  int dim_ = 0;
  int mass_ = 0;
  std::vector<int> counts_;
  std::vector<std::pair<Point, int>> atoms_;
};

// xi \ chi: componentwise positive part (xi(x) - chi(x))_+.
Configuration setminus(const Configuration& xi, const Configuration& chi);

// Componentwise: chi <= xi.
bool dominated_by(const Configuration& chi, const Configuration& xi);

// A functional F on configurations; the flags are claims that
// check_monotone_convex can verify, never facts.
struct Functional {
  std::function<double(const Configuration&)> eval;
  bool claims_nondecreasing = false;
  bool claims_convex = false;
  double operator()(const Configuration& xi) const { return eval(xi); }
};

// D_x^- F(xi) = F(xi) - F(xi - delta_x); requires xi(x) >= 1.
double diff_minus(const Functional& f, const Configuration& xi, int x);
double diff_minus(const Functional& f, const Configuration& xi, const Point& x);
// D_x^+ F(xi) = F(xi + delta_x) - F(xi).
double diff_plus(const Functional& f, const Configuration& xi, int x);
double diff_plus(const Functional& f, const Configuration& xi, const Point& x);

// Order-q U-statistic: sum of h over ordered q-tuples of distinct points of
// the expansion of xi. Kernels must be symmetric.
double u_statistic(int q, const std::function<double(const std::vector<int>&)>& h,
                   const Configuration& xi);
double u_statistic(int q, const std::function<double(const std::vector<Point>&)>& h,
                   const Configuration& xi);

Functional make_u_statistic_functional(int q,
                                       std::function<double(const std::vector<int>&)> h);
Functional make_euclidean_u_statistic_functional(
    int q, std::function<double(const std::vector<Point>&)> h);

// All count vectors of length k with total mass <= mass_cap, ordered by
// (total mass, lexicographic).
std::vector<std::vector<int>> enumerate_count_vectors(int k, int mass_cap);

struct MonotoneConvexReport {
  bool nondecreasing = true;
  bool convex = true;
  std::string first_violation;
};

// Exhaustive D+ checks over an enumerated finite domain: F is nondecreasing
// iff D_x^+ F >= 0 everywhere, convex iff D_y^+ D_x^+ F >= 0 everywhere.
// The domain is all configurations on k points with mass <= mass_cap.
MonotoneConvexReport check_monotone_convex(const Functional& f, int ground_size, int mass_cap,
                                           double tol = 1e-9);

// Spot check for euclidean functionals: sampled configurations, random added
// points drawn from the box.
MonotoneConvexReport check_monotone_convex_sampled(const Functional& f,
                                                   const std::vector<Configuration>& samples,
                                                   const std::vector<Point>& extra_points,
                                                   double tol = 1e-9);

}  // namespace ppt
