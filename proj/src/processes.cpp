#include "ppt/processes.hpp"

#include <algorithm>
#include <cmath>

namespace ppt {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binom_coeff(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace

ConfigurationSpaceIndex::ConfigurationSpaceIndex(int ground_size, int mass_cap)
    : k_(ground_size), cap_(mass_cap) {
  auto vecs = enumerate_count_vectors(ground_size, mass_cap);
  configs_.reserve(vecs.size());
  by_mass_.assign(static_cast<std::size_t>(mass_cap) + 1, {});
  lookup_.reserve(vecs.size());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    lookup_.push_back({vecs[i], static_cast<int>(i)});
    Configuration c = Configuration::from_counts(vecs[i]);
    by_mass_[static_cast<std::size_t>(c.total_mass())].push_back(static_cast<int>(i));
    configs_.push_back(std::move(c));
  }
  std::sort(lookup_.begin(), lookup_.end());
}

int ConfigurationSpaceIndex::index_of(const Configuration& xi) const {
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                             std::make_pair(xi.counts(), 0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it == lookup_.end() || it->first != xi.counts())
    throw InputError("configuration outside the enumerated space");
  return it->second;
}

bool ConfigurationSpaceIndex::contains(const Configuration& xi) const {
  if (!xi.finite_mode() || xi.ground_size() != k_ || xi.total_mass() > cap_) return false;
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                             std::make_pair(xi.counts(), 0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  return it != lookup_.end() && it->first == xi.counts();
}

const std::vector<int>& ConfigurationSpaceIndex::indices_of_mass(int n) const {
  if (n < 0 || n > cap_) throw InputError("mass outside the enumeration cap");
  return by_mass_[static_cast<std::size_t>(n)];
}

IndexPtr make_index(int ground_size, int mass_cap) {
  return std::make_shared<const ConfigurationSpaceIndex>(ground_size, mass_cap);
}

ProcessLaw mixed_binomial_law(const DiscreteMeasure& mu, const DiscreteMeasure& kappa,
                              IndexPtr index) {
  if (!mu.is_probability() || !kappa.is_probability())
    throw InputError("mixed_binomial_law requires probability measures");
  if (mu.size() != index->ground_size())
    throw InputError("sampling measure size must match the ground space");
  if (kappa.size() > index->mass_cap() + 1) {
    for (int n = index->mass_cap() + 1; n < kappa.size(); ++n)
      if (kappa[n] > 0.0) throw InputError("count law exceeds the enumeration mass cap");
  }
  ProcessLaw law;
  law.index = index;
  law.p.assign(static_cast<std::size_t>(index->size()), 0.0);
  for (int i = 0; i < index->size(); ++i) {
    const Configuration& xi = index->config(i);
    int n = xi.total_mass();
    if (n >= kappa.size() || kappa[n] <= 0.0) continue;
    double logp = std::log(kappa[n]) + log_factorial(n);
    bool null = false;
    for (int z = 0; z < mu.size() && !null; ++z) {
      int c = xi.count(z);
      if (c == 0) continue;
      if (mu[z] <= 0.0) {
        null = true;
        break;
      }
      logp += c * std::log(mu[z]) - log_factorial(c);
    }
    if (!null) law.p[static_cast<std::size_t>(i)] = std::exp(logp);
  }
  return law;
}

double poisson_tail(double lambda, int cap) {
  if (lambda < 0.0) throw InputError("poisson_tail: negative mean");
  if (lambda == 0.0) return 0.0;
  double term = std::exp(-lambda), cdf = term;
  for (int n = 1; n <= cap; ++n) {
    term *= lambda / n;
    cdf += term;
  }
  return std::max(0.0, 1.0 - cdf);
}

int default_poisson_cap(double total_intensity, double tail_tol) {
  int cap = std::max(1, static_cast<int>(std::ceil(total_intensity)));
  while (poisson_tail(total_intensity, cap) > tail_tol && cap < 4000) ++cap;
  return cap;
}

ProcessLaw poisson_law(const DiscreteMeasure& intensity, IndexPtr index) {
  if (intensity.size() != index->ground_size())
    throw InputError("intensity size must match the ground space");
  double total = intensity.total();
  ProcessLaw law;
  law.index = index;
  law.p.assign(static_cast<std::size_t>(index->size()), 0.0);
  double masssum = 0.0;
  for (int i = 0; i < index->size(); ++i) {
    const Configuration& xi = index->config(i);
    double logp = -total;
    bool null = false;
    for (int z = 0; z < intensity.size() && !null; ++z) {
      int c = xi.count(z);
      if (c == 0) continue;
      if (intensity[z] <= 0.0) {
        null = true;
        break;
      }
      logp += c * std::log(intensity[z]) - log_factorial(c);
    }
    if (null) continue;
    double p = std::exp(logp);
    law.p[static_cast<std::size_t>(i)] = p;
    masssum += p;
  }
  law.tail_bound = poisson_tail(total, index->mass_cap());
  if (masssum <= 0.0) throw InputError("poisson_law: degenerate truncation");
  for (double& p : law.p) p /= masssum;
  law.exact = law.tail_bound == 0.0;
  return law;
}

DiscreteMeasure mass_law(const ProcessLaw& law) {
  Vec w(static_cast<std::size_t>(law.index->mass_cap()) + 1, 0.0);
  for (int i = 0; i < law.index->size(); ++i)
    w[static_cast<std::size_t>(law.index->config(i).total_mass())] += law.prob(i);
  double total = sum(w);
  for (double& x : w) x /= total;
  return DiscreteMeasure::probability(std::move(w));
}

ProcessLaw condition_on_mass(const ProcessLaw& law, int n) {
  if (n < 0 || n > law.index->mass_cap()) throw InputError("conditioning mass outside the cap");
  double total = 0.0;
  for (int i : law.index->indices_of_mass(n)) total += law.prob(i);
  if (total <= 0.0) throw InputError("conditioning on a null mass event");
  ProcessLaw out;
  out.index = law.index;
  out.exact = law.exact;
  out.tail_bound = law.tail_bound;
  out.p.assign(law.p.size(), 0.0);
  for (int i : law.index->indices_of_mass(n))
    out.p[static_cast<std::size_t>(i)] = law.prob(i) / total;
  return out;
}

double relative_entropy(const ProcessLaw& pi, const ProcessLaw& law) {
  if (pi.index != law.index && pi.index->size() != law.index->size())
    throw InputError("relative_entropy requires a shared enumeration");
  double h = 0.0;
  for (std::size_t i = 0; i < pi.p.size(); ++i) {
    double term = entropy_term(pi.p[i], law.p[i]);
    if (std::isinf(term)) return kInf;
    h += term;
  }
  return std::max(h, 0.0);
}

double tv_distance(const ProcessLaw& a, const ProcessLaw& b) {
  if (a.p.size() != b.p.size()) throw InputError("tv_distance requires a shared enumeration");
  double s = 0.0;
  for (std::size_t i = 0; i < a.p.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

ChainRuleReport chain_rule_check(const ProcessLaw& pi, const DiscreteMeasure& mu,
                                 const DiscreteMeasure& kappa) {
  ProcessLaw base = mixed_binomial_law(mu, kappa, pi.index);
  ChainRuleReport rep;
  rep.direct = relative_entropy(pi, base);
  if (std::isinf(rep.direct)) {
    rep.infinite = true;
    return rep;
  }
  DiscreteMeasure lambda = mass_law(pi);
  Vec kap(static_cast<std::size_t>(pi.index->mass_cap()) + 1, 0.0);
  for (int n = 0; n < kappa.size() && n <= pi.index->mass_cap(); ++n)
    kap[static_cast<std::size_t>(n)] = kappa[n];
  rep.mass_term = relative_entropy(lambda, DiscreteMeasure::probability(std::move(kap)));
  rep.decomposed = rep.mass_term;
  for (int n = 0; n <= pi.index->mass_cap(); ++n) {
    if (lambda[n] <= 0.0) continue;
    ProcessLaw pin = condition_on_mass(pi, n);
    ProcessLaw bn = mixed_binomial_law(mu, DiscreteMeasure::dirac(n, pi.index->mass_cap() + 1),
                                       pi.index);
    rep.decomposed += lambda[n] * relative_entropy(pin, bn);
  }
  rep.abs_error = std::abs(rep.direct - rep.decomposed);
  return rep;
}

ProcessLaw thin_law(const ProcessLaw& law, double t) {
  if (t < 0.0 || t > 1.0) throw InputError("thin_law: t must lie in [0,1]");
  ProcessLaw out;
  out.index = law.index;
  out.exact = law.exact;
  out.tail_bound = law.tail_bound;
  out.p.assign(law.p.size(), 0.0);
  const int k = law.index->ground_size();
  for (int i = 0; i < law.index->size(); ++i) {
    double pxi = law.prob(i);
    if (pxi <= 0.0) continue;
    const auto& counts = law.index->config(i).counts();
    // distribute over all sub-configurations chi <= xi with binomial kernels
    std::vector<int> chi(static_cast<std::size_t>(k), 0);
    std::function<void(int, double)> rec = [&](int z, double w) {
      if (w <= 0.0) return;
      if (z == k) {
        out.p[static_cast<std::size_t>(
            law.index->index_of(Configuration::from_counts(chi)))] += pxi * w;
        return;
      }
      int c = counts[static_cast<std::size_t>(z)];
      for (int kept = 0; kept <= c; ++kept) {
        double lw = log_binom_coeff(c, kept);
        double factor;
        if (t == 0.0)
          factor = kept == 0 ? 1.0 : 0.0;
        else if (t == 1.0)
          factor = kept == c ? 1.0 : 0.0;
        else
          factor = std::exp(lw + kept * std::log(t) + (c - kept) * std::log(1.0 - t));
        chi[static_cast<std::size_t>(z)] = kept;
        rec(z + 1, w * factor);
      }
      chi[static_cast<std::size_t>(z)] = 0;
    };
    rec(0, 1.0);
  }
  double total = sum(out.p);
  for (double& p : out.p) p /= total;
  return out;
}

Configuration sample_mixed_binomial(const DiscreteMeasure& mu, const DiscreteMeasure& kappa,
                                    RngStream& rng) {
  int n = rng.categorical(kappa.values());
  std::vector<int> counts(static_cast<std::size_t>(mu.size()), 0);
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(rng.categorical(mu.values()))];
  return Configuration::from_counts(std::move(counts));
}

Configuration sample_poisson_finite(const DiscreteMeasure& intensity, RngStream& rng) {
  std::vector<int> counts(static_cast<std::size_t>(intensity.size()), 0);
  for (int z = 0; z < intensity.size(); ++z)
    counts[static_cast<std::size_t>(z)] = rng.poisson(intensity[z]);
  return Configuration::from_counts(std::move(counts));
}

Configuration sample_poisson_box(double rate, const GroundSpace& box, RngStream& rng) {
  if (rate < 0.0) throw InputError("sample_poisson_box: negative rate");
  int n = rng.poisson(rate * box.box_volume());
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Point p(static_cast<std::size_t>(box.dimension()));
    for (int d = 0; d < box.dimension(); ++d) {
      auto [lo, hi] = box.box()[static_cast<std::size_t>(d)];
      p[static_cast<std::size_t>(d)] = rng.uniform(lo, hi);
    }
    pts.push_back(std::move(p));
  }
  if (pts.empty()) return Configuration::empty_euclidean(box.dimension());
  return Configuration::from_points(std::move(pts));
}

Configuration thin_sample(const Configuration& xi, double t, RngStream& rng) {
  if (t < 0.0 || t > 1.0) throw InputError("thin_sample: t must lie in [0,1]");
  if (xi.finite_mode()) {
    std::vector<int> counts(xi.counts().size(), 0);
    for (std::size_t z = 0; z < counts.size(); ++z)
      counts[z] = rng.binomial(xi.counts()[z], t);
    return Configuration::from_counts(std::move(counts));
  }
  std::vector<Point> keep;
  for (const Point& p : xi.expand_points())
    if (rng.uniform01() < t) keep.push_back(p);
  if (keep.empty()) return Configuration::empty_euclidean(xi.dimension());
  return Configuration::from_points(std::move(keep));
}

}  // namespace ppt
