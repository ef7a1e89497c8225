#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppt {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown on violated preconditions (bad domains, mismatched shapes, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative solver fails to reach its tolerance. Carries the
// best value found and the residuals so callers can report diagnostics.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double best_value, double gap, double residual)
      : std::runtime_error(what), best_value(best_value), gap(gap), residual(residual) {}
  double best_value;
  double gap;
  double residual;
};

// x log x with the convention 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// One term of a relative entropy sum: p log(p/q), with 0 log 0 = 0 and
// p > 0, q = 0 giving +inf (absolute-continuity failure).
inline double entropy_term(double p, double q) {
  if (p <= 0.0) return 0.0;
  if (q <= 0.0) return kInf;
  return p * std::log(p / q);
}

// Product with the convention 0 * inf = 0.
inline double mul_ext(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

inline double sum(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

inline double max_abs(const Vec& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline bool approx_equal(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

}  // namespace ppt
