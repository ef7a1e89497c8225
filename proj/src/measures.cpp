#include "ppt/measures.hpp"

#include <cmath>

#include "json.hpp"

namespace ppt {

DiscreteMeasure DiscreteMeasure::probability(Vec weights) {
  if (weights.empty()) throw InputError("probability measure needs a nonempty support");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InputError("probability weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InputError("probability weights must sum to 1 within 1e-12");
  DiscreteMeasure m;
  m.correction_ = std::abs(total - 1.0);
  for (double& w : weights) w /= total;
  m.w_ = std::move(weights);
  m.is_probability_ = true;
  return m;
}

DiscreteMeasure DiscreteMeasure::weights(Vec weights) {
  if (weights.empty()) throw InputError("measure needs a nonempty support");
  for (double w : weights) {
    if (w < 0.0) throw InputError("weights must be nonnegative");
    if (!std::isfinite(w)) throw InputError("weights must be finite");
  }
  DiscreteMeasure m;
  m.w_ = std::move(weights);
  return m;
}

DiscreteMeasure DiscreteMeasure::dirac(int index, int size) {
  if (index < 0 || index >= size) throw InputError("dirac index out of range");
  Vec w(static_cast<std::size_t>(size), 0.0);
  w[static_cast<std::size_t>(index)] = 1.0;
  return probability(std::move(w));
}

DiscreteMeasure DiscreteMeasure::uniform(int size) {
  if (size <= 0) throw InputError("uniform measure needs size >= 1");
  Vec w(static_cast<std::size_t>(size), 1.0 / size);
  return probability(std::move(w));
}

DiscreteMeasure DiscreteMeasure::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weights"))
    throw InputError("measure json needs {weights}");
  Vec w = j.at("weights").get<Vec>();
  bool prob = j.value("is_probability", true);
  return prob ? probability(std::move(w)) : weights(std::move(w));
}

double DiscreteMeasure::total() const { return sum(w_); }

double relative_entropy(const DiscreteMeasure& nu, const DiscreteMeasure& gamma) {
  if (!nu.is_probability() || !gamma.is_probability())
    throw InputError("relative_entropy requires probability measures");
  if (nu.size() != gamma.size())
    throw InputError("relative_entropy requires a common support universe");
  double h = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    double term = entropy_term(nu[i], gamma[i]);
    if (std::isinf(term)) return kInf;
    h += term;
  }
  return std::max(h, 0.0);
}

double tv_distance(const DiscreteMeasure& nu1, const DiscreteMeasure& nu2) {
  if (!nu1.is_probability() || !nu2.is_probability())
    throw InputError("tv_distance requires probability measures");
  if (nu1.size() != nu2.size())
    throw InputError("tv_distance requires a common support universe");
  double s = 0.0;
  for (int i = 0; i < nu1.size(); ++i) s += std::abs(nu1[i] - nu2[i]);
  return 0.5 * s;
}

}  // namespace ppt
