#pragma once

#include <memory>
#include <vector>

#include "ppt/config.hpp"
#include "ppt/ground.hpp"
#include "ppt/measures.hpp"
#include "ppt/numeric.hpp"
#include "ppt/rng.hpp"

namespace ppt {

// Deterministic enumeration of all count vectors on k points with total mass
// at most N, with index maps both ways.
class ConfigurationSpaceIndex {
 public:
  ConfigurationSpaceIndex(int ground_size, int mass_cap);

  int ground_size() const { return k_; }
  int mass_cap() const { return cap_; }
  int size() const { return static_cast<int>(configs_.size()); }
  const Configuration& config(int index) const { return configs_[static_cast<std::size_t>(index)]; }
  int index_of(const Configuration& xi) const;
  bool contains(const Configuration& xi) const;
  const std::vector<int>& indices_of_mass(int n) const;

 private:
  int k_, cap_;
  std::vector<Configuration> configs_;
  std::vector<std::vector<int>> by_mass_;
  std::vector<std::pair<std::vector<int>, int>> lookup_;  // sorted counts -> index
};

using IndexPtr = std::shared_ptr<const ConfigurationSpaceIndex>;

IndexPtr make_index(int ground_size, int mass_cap);

// Probability law over an enumerated, mass-truncated configuration space.
struct ProcessLaw {
  IndexPtr index;
  Vec p;
  bool exact = true;          // false when a truncation was renormalized away
  double tail_bound = 0.0;    // mass removed by the truncation

  double prob(int idx) const { return p[static_cast<std::size_t>(idx)]; }
  double prob(const Configuration& xi) const { return p[static_cast<std::size_t>(index->index_of(xi))]; }
  DiscreteMeasure as_measure() const { return DiscreteMeasure::probability(p); }
};

// Law of sum_{i<=N} delta_{X_i} with N ~ kappa (on {0..mass_cap}) and X_i
// iid mu. Exact: P(xi) = kappa(|xi|) multinomial(|xi|; xi) prod mu^xi.
ProcessLaw mixed_binomial_law(const DiscreteMeasure& mu, const DiscreteMeasure& kappa,
                              IndexPtr index);

// Poisson law with finite intensity (weights) on the ground points,
// truncated at the index mass cap and renormalized; the removed tail mass is
// recorded in the result.
ProcessLaw poisson_law(const DiscreteMeasure& intensity, IndexPtr index);

// Smallest cap N with P(Poisson(total) > N) <= tail_tol.
int default_poisson_cap(double total_intensity, double tail_tol = 1e-10);

// Poisson mass-law tail P(Poisson(lambda) > cap).
double poisson_tail(double lambda, int cap);

// Pushforward of the law under total mass, as a measure on {0..N}.
DiscreteMeasure mass_law(const ProcessLaw& law);

// Conditional law on {mass = n}; requires positive mass probability.
ProcessLaw condition_on_mass(const ProcessLaw& law, int n);

// H(Pi | law) over a shared enumeration.
double relative_entropy(const ProcessLaw& pi, const ProcessLaw& law);
double tv_distance(const ProcessLaw& a, const ProcessLaw& b);

struct ChainRuleReport {
  double direct = 0.0;      // H(Pi | B_{mu,kappa})
  double mass_term = 0.0;   // H(lambda | kappa)
  double decomposed = 0.0;  // mass_term + sum_n lambda(n) H(Pi^n | B_{mu,n})
  bool infinite = false;
  double abs_error = 0.0;
};

// Verifies the relative-entropy chain rule for Pi against B_{mu,kappa}.
ChainRuleReport chain_rule_check(const ProcessLaw& pi, const DiscreteMeasure& mu,
                                 const DiscreteMeasure& kappa);

// Exact law of the t-thinning (each point kept independently with
// probability t).
ProcessLaw thin_law(const ProcessLaw& law, double t);

// ---- samplers (seed-deterministic; draw streams derived upstream) ----

Configuration sample_mixed_binomial(const DiscreteMeasure& mu, const DiscreteMeasure& kappa,
                                    RngStream& rng);
Configuration sample_poisson_finite(const DiscreteMeasure& intensity, RngStream& rng);
// Homogeneous Poisson process with the given rate per unit volume on a box.
Configuration sample_poisson_box(double rate, const GroundSpace& box, RngStream& rng);
Configuration thin_sample(const Configuration& xi, double t, RngStream& rng);

}  // namespace ppt
