#pragma once

#include <vector>

#include "ppt/numeric.hpp"

#include "json.hpp"

namespace ppt {

// A nonnegative weight vector over an indexed finite support (ground points
// or enumerated configurations). Probability measures are renormalized at
// construction when within tolerance, and the applied correction is kept.
class DiscreteMeasure {
 public:
  static DiscreteMeasure probability(Vec weights);
  static DiscreteMeasure weights(Vec weights);
  static DiscreteMeasure dirac(int index, int size);
  static DiscreteMeasure uniform(int size);
  static DiscreteMeasure from_json(const nlohmann::json& j);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const Vec& values() const { return w_; }
  double total() const;
  bool is_probability() const { return is_probability_; }
  double applied_correction() const { return correction_; }

 private:
  Vec w_;
  bool is_probability_ = false;
  double correction_ = 0.0;
};

// H(nu | gamma) = sum nu log(nu/gamma), +inf off absolute continuity.
// Both arguments must be probability measures on the same universe.
double relative_entropy(const DiscreteMeasure& nu, const DiscreteMeasure& gamma);

// (1/2) sum |nu1 - nu2|.
double tv_distance(const DiscreteMeasure& nu1, const DiscreteMeasure& nu2);

}  // namespace ppt
