// ppt: batch experiment harness for point-process transport costs and
// inequality verification.
//
//   ppt run <config.json> [--seed U64] [--out DIR] [--jobs N]
//   ppt validate <config.json>
//
// Runs are deterministic given (config, seed): all randomness flows from the
// master seed through per-instance stream indices, report files embed the
// config hash, and CSV cells use fixed "%.17g" formatting.
//
// Exit status: 0 clean, 1 inequality violations, 2 config/schema errors,
// 3 solver failures.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ppt/concentration.hpp"
#include "ppt/inequalities.hpp"
#include "ppt/io.hpp"
#include "ppt/lifted.hpp"
#include "ppt/logsob.hpp"
#include "ppt/processes.hpp"
#include "ppt/transport.hpp"

using nlohmann::json;
using namespace ppt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct RunContext {
  json config;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int jobs = 1;
  json report;
  int violations = 0;
  int solver_failures = 0;
  std::vector<std::string> outputs;

  void emit_csv(const std::string& name, const CsvWriter& csv) {
    csv.write_file((out_dir / name).string());
    outputs.push_back(name);
  }
};

// ordered parallel map: results identical to the serial run for any job count
template <typename Fn>
void for_each_ordered(int jobs, int n, Fn&& fn) {
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futs;
  std::atomic<int> next{0};
  for (int w = 0; w < jobs; ++w)
    futs.push_back(std::async(std::launch::async, [&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    }));
  for (auto& f : futs) f.get();
}

double param_or(const json& p, const std::string& key, double def) {
  return p.contains(key) ? p.at(key).get<double>() : def;
}

int iparam_or(const json& p, const std::string& key, int def) {
  return p.contains(key) ? p.at(key).get<int>() : def;
}

Vec vec_param(const json& p, const std::string& key) { return p.at(key).get<Vec>(); }

DiscreteMeasure probability_param(const json& p, const std::string& key) {
  return DiscreteMeasure::probability(vec_param(p, key));
}

std::string fmt(double v) { return CsvWriter::format(v); }

GroundSpace hamming_space(int k) {
  std::vector<std::string> labels;
  Mat metric(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(k), 1.0));
  for (int i = 0; i < k; ++i) {
    labels.push_back("z" + std::to_string(i));
    metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
  }
  return GroundSpace::finite(std::move(labels), std::move(metric));
}

// ---- experiment: transport -------------------------------------------------

void validate_transport(const json& p) {
  require_known_keys(p, {"space", "cost", "nu1", "nu2", "alpha_t"}, "transport params");
  if (!p.contains("space") || !p.contains("nu1") || !p.contains("nu2"))
    throw InputError("transport params need space, nu1, nu2");
  GroundSpace::from_json(p.at("space"));
}

void run_transport(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  GroundSpace space = GroundSpace::from_json(p.at("space"));
  auto nu1 = probability_param(p, "nu1");
  auto nu2 = probability_param(p, "nu2");
  if (nu1.size() != space.size() || nu2.size() != space.size())
    throw InputError("measure sizes must match the space");
  double t = param_or(p, "alpha_t", 0.5);
  std::string costname = p.contains("cost") ? p.at("cost").get<std::string>() : "hamming";
  CostFunction cost = costname == "hamming"            ? CostFunction::hamming()
                      : costname == "squared_distance" ? CostFunction::squared_distance()
                      : costname == "distance"
                          ? CostFunction::distance_power(1.0)
                          : throw InputError("unknown cost: " + costname);

  CsvWriter csv({"quantity", "value", "solver_gap", "residual"});
  Mat cm = cost.matrix(space);
  auto lin = ot_lp(cm, nu1, nu2);
  csv.add_row({"linear_transport", fmt(lin.value), "0", "0"});
  csv.add_row({"tv_distance", fmt(tv_distance(nu1, nu2)), "0", "0"});
  csv.add_row({"relative_entropy_12", fmt(relative_entropy(nu1, nu2)), "0", "0"});
  csv.add_row({"marton_cost", fmt(marton_cost(nu1, nu2)), "0", "0"});
  // the dembo family lives on [0,1], so it pairs with the hamming cost; the
  // square family covers the user-selected cost on its full range
  Mat ham(static_cast<std::size_t>(space.size()), Vec(static_cast<std::size_t>(space.size()), 1.0));
  for (int i = 0; i < space.size(); ++i)
    ham[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
  auto weak = weak_transport(AlphaFamily::dembo(t), ham, nu1, nu2, 1e-7);
  csv.add_row({"weak_dembo_hamming", fmt(weak.value), fmt(weak.gap), fmt(weak.residual)});
  auto weak_sq = weak_transport(AlphaFamily::square(), cm, nu1, nu2, 1e-7);
  csv.add_row({"weak_square_cost", fmt(weak_sq.value), fmt(weak_sq.gap), fmt(weak_sq.residual)});
  ctx.emit_csv("transport.csv", csv);

  // cost matrix and optimal linear coupling
  CsvWriter ccsv({"source", "target", "cost", "coupling"});
  for (int i = 0; i < space.size(); ++i)
    for (int j = 0; j < space.size(); ++j)
      ccsv.add_row({space.labels()[static_cast<std::size_t>(i)],
                    space.labels()[static_cast<std::size_t>(j)],
                    fmt(cm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]),
                    fmt(lin.coupling.empty()
                            ? 0.0
                            : lin.coupling[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])});
  ctx.emit_csv("coupling.csv", ccsv);
  ctx.report["summary"] = {{"linear", lin.value}, {"weak", weak.value}};
}

// ---- experiment: laws --------------------------------------------------------

void validate_laws(const json& p) {
  require_known_keys(p, {"k", "mass_cap", "mode", "mu", "kappa", "intensity", "thin_t", "samples"},
                     "laws params");
  if (!p.contains("k") || !p.contains("mass_cap") || !p.contains("mode"))
    throw InputError("laws params need k, mass_cap, mode");
  std::string mode = p.at("mode").get<std::string>();
  if (mode != "binomial" && mode != "poisson")
    throw InputError("laws mode must be binomial|poisson");
  if (mode == "binomial" && (!p.contains("mu") || !p.contains("kappa")))
    throw InputError("binomial laws need mu and kappa");
  if (mode == "poisson" && !p.contains("intensity"))
    throw InputError("poisson laws need an intensity");
}

void run_laws(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  int k = p.at("k").get<int>();
  int cap = p.at("mass_cap").get<int>();
  auto idx = make_index(k, cap);
  std::string mode = p.at("mode").get<std::string>();
  ProcessLaw law;
  if (mode == "binomial") {
    law = mixed_binomial_law(probability_param(p, "mu"), probability_param(p, "kappa"), idx);
  } else {
    law = poisson_law(DiscreteMeasure::weights(vec_param(p, "intensity")), idx);
  }
  if (p.contains("thin_t")) law = thin_law(law, p.at("thin_t").get<double>());

  CsvWriter csv({"index", "configuration", "mass", "probability"});
  for (int i = 0; i < idx->size(); ++i) {
    std::string cfg;
    for (int z = 0; z < k; ++z) {
      if (z) cfg += ' ';
      cfg += std::to_string(idx->config(i).count(z));
    }
    csv.add_row({CsvWriter::format(i), cfg, CsvWriter::format(idx->config(i).total_mass()),
                 fmt(law.prob(i))});
  }
  ctx.emit_csv("law.csv", csv);

  auto ml = mass_law(law);
  CsvWriter mcsv({"mass", "probability"});
  for (int n = 0; n <= cap; ++n) mcsv.add_row({CsvWriter::format(n), fmt(ml[n])});
  ctx.emit_csv("mass_law.csv", mcsv);

  // sampler output as json lines, one configuration per draw
  int n_samples = iparam_or(p, "samples", 0);
  if (n_samples > 0) {
    std::ofstream out(ctx.out_dir / "samples.jsonl", std::ios::binary);
    for (int s = 0; s < n_samples; ++s) {
      RngStream rng(ctx.seed, static_cast<std::uint64_t>(s));
      Configuration xi = mode == "binomial"
                             ? sample_mixed_binomial(probability_param(p, "mu"),
                                                     probability_param(p, "kappa"), rng)
                             : sample_poisson_finite(
                                   DiscreteMeasure::weights(vec_param(p, "intensity")), rng);
      if (p.contains("thin_t")) xi = thin_sample(xi, p.at("thin_t").get<double>(), rng);
      out << config_to_json(xi).dump() << "\n";
    }
    ctx.outputs.push_back("samples.jsonl");
  }
  ctx.report["summary"] = {{"states", idx->size()}, {"tail_bound", law.tail_bound}};
}

// ---- experiment: verify-dembo --------------------------------------------------

void validate_dembo(const json& p) {
  require_known_keys(p, {"k", "instances", "t_values", "tolerance"}, "verify-dembo params");
  if (!p.contains("k") || !p.contains("instances")) throw InputError("need k and instances");
}

void run_dembo(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  int k = p.at("k").get<int>();
  int instances = p.at("instances").get<int>();
  Vec ts = p.contains("t_values") ? vec_param(p, "t_values") : Vec{0.25, 0.5, 0.75};
  double tol = param_or(p, "tolerance", 1e-6);

  struct Row {
    int inst;
    double t, lhs, rhs, margin, gap;
    bool violated;
  };
  std::vector<std::vector<Row>> rows(static_cast<std::size_t>(instances));
  std::atomic<int> solver_failures{0};
  for_each_ordered(ctx.jobs, instances, [&](int i) {
    RngStream rng(ctx.seed, static_cast<std::uint64_t>(i));
    Vec g(static_cast<std::size_t>(k)), n1(static_cast<std::size_t>(k)),
        n2(static_cast<std::size_t>(k));
    auto draw = [&](Vec& w, double floor) {
      double tot = 0.0;
      for (auto& x : w) {
        x = floor - std::log(1.0 - rng.uniform01());
        tot += x;
      }
      for (auto& x : w) x /= tot;
      double c = 0.0;
      for (double x : w) c += x;
      w.back() += 1.0 - c;
    };
    draw(g, 0.02);
    draw(n1, 0.0);
    draw(n2, 0.0);
    auto gm = DiscreteMeasure::probability(g);
    auto m1 = DiscreteMeasure::probability(n1);
    auto m2 = DiscreteMeasure::probability(n2);
    for (double t : ts) {
      try {
        auto rep = verify_base_dembo(gm, m1, m2, t, tol);
        rows[static_cast<std::size_t>(i)].push_back(
            {i, t, rep.lhs, rep.rhs, rep.margin, rep.diagnostics.at("solver_gap"), rep.violated});
        if (i == 0 && ctx.report.find("first_report") == ctx.report.end())
          ctx.report["first_report"] = rep.to_json();
      } catch (const SolverFailure&) {
        solver_failures.fetch_add(1);
      }
    }
  });
  ctx.solver_failures += solver_failures.load();

  CsvWriter csv({"instance", "t", "lhs", "rhs", "margin", "solver_gap", "violated"});
  int violated = 0;
  for (auto& batch : rows)
    for (auto& r : batch) {
      csv.add_row({CsvWriter::format(r.inst), fmt(r.t), fmt(r.lhs), fmt(r.rhs), fmt(r.margin),
                   fmt(r.gap), r.violated ? "1" : "0"});
      if (r.violated) ++violated;
    }
  ctx.violations += violated;
  ctx.emit_csv("dembo.csv", csv);
  ctx.report["summary"] = {{"instances", instances}, {"violations", violated}};
}

// ---- experiment: verify-marton --------------------------------------------------

void validate_marton(const json& p) {
  require_known_keys(p,
                     {"k", "mass_cap", "intensity", "instances", "t_values", "tolerance",
                      "exhaustive_point_masses"},
                     "verify-marton params");
  if (!p.contains("k") || !p.contains("mass_cap") || !p.contains("intensity"))
    throw InputError("need k, mass_cap, intensity");
}

void run_marton(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  int k = p.at("k").get<int>();
  int cap = p.at("mass_cap").get<int>();
  Vec intensity = vec_param(p, "intensity");
  int instances = iparam_or(p, "instances", 0);
  bool exhaustive =
      p.contains("exhaustive_point_masses") && p.at("exhaustive_point_masses").get<bool>();
  Vec ts = p.contains("t_values") ? vec_param(p, "t_values") : Vec{0.25, 0.5, 0.75};
  double tol = param_or(p, "tolerance", 1e-4);

  auto idx = make_index(k, cap);
  GroundSpace space = hamming_space(k);
  auto law = poisson_law(DiscreteMeasure::weights(intensity), idx);

  CsvWriter csv({"kind", "instance", "t", "lhs", "rhs", "margin", "violated"});
  int violated = 0;

  if (exhaustive) {
    for (double t : ts)
      for (int i = 0; i < idx->size(); ++i)
        for (int j = 0; j < idx->size(); ++j) {
          ProcessLaw di, dj;
          di.index = dj.index = idx;
          di.p.assign(static_cast<std::size_t>(idx->size()), 0.0);
          dj.p = di.p;
          di.p[static_cast<std::size_t>(i)] = 1.0;
          dj.p[static_cast<std::size_t>(j)] = 1.0;
          try {
            auto rep = verify_marton_process(space, law, di, dj, t, tol);
            csv.add_row({"point_mass", CsvWriter::format(i * idx->size() + j), fmt(t),
                         fmt(rep.lhs), fmt(rep.rhs), fmt(rep.margin), rep.violated ? "1" : "0"});
            if (rep.violated) ++violated;
          } catch (const SolverFailure&) {
            ++ctx.solver_failures;
          }
        }
  }

  struct Row {
    double t, lhs, rhs, margin;
    bool violated;
  };
  std::vector<std::vector<Row>> rows(static_cast<std::size_t>(instances));
  std::atomic<int> fails{0};
  for_each_ordered(ctx.jobs, instances, [&](int i) {
    RngStream rng(ctx.seed, static_cast<std::uint64_t>(i) + 1000);
    auto density_law = [&]() {
      Vec w(law.p.size(), 0.0);
      double tot = 0.0;
      for (std::size_t q = 0; q < w.size(); ++q) {
        w[q] = law.p[q] * std::exp(0.8 * rng.normal());
        tot += w[q];
      }
      for (auto& x : w) x /= tot;
      double c = 0.0;
      for (double x : w) c += x;
      w[0] += 1.0 - c;
      ProcessLaw out;
      out.index = idx;
      out.p = std::move(w);
      out.tail_bound = law.tail_bound;
      out.exact = law.exact;
      return out;
    };
    auto p1 = density_law();
    auto p2 = density_law();
    for (double t : ts) {
      try {
        auto rep = verify_marton_process(space, law, p1, p2, t, tol);
        rows[static_cast<std::size_t>(i)].push_back({t, rep.lhs, rep.rhs, rep.margin, rep.violated});
      } catch (const SolverFailure&) {
        fails.fetch_add(1);
      }
    }
  });
  ctx.solver_failures += fails.load();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (auto& r : rows[i]) {
      csv.add_row({"random_density", CsvWriter::format(static_cast<int>(i)), fmt(r.t), fmt(r.lhs),
                   fmt(r.rhs), fmt(r.margin), r.violated ? "1" : "0"});
      if (r.violated) ++violated;
    }
  ctx.violations += violated;
  ctx.emit_csv("marton.csv", csv);
  ctx.report["summary"] = {{"violations", violated}, {"truncation_tail", law.tail_bound}};
}

// ---- experiment: verify-talagrand -------------------------------------------------

void validate_talagrand(const json& p) {
  require_known_keys(p,
                     {"mode", "m_grid", "n_values", "k", "mass_cap", "mu", "kappa",
                      "certificate_samples", "certificate_inflation", "instances"},
                     "verify-talagrand params");
  if (!p.contains("mode")) throw InputError("need mode: gaussian|finite");
  std::string mode = p.at("mode").get<std::string>();
  if (mode != "gaussian" && mode != "finite") throw InputError("mode must be gaussian|finite");
}

void run_talagrand(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  std::string mode = p.at("mode").get<std::string>();
  CsvWriter csv({"kind", "param1", "param2", "n", "lhs", "rhs", "margin", "violated", "vacuous"});
  int violated = 0;

  if (mode == "gaussian") {
    Vec m_grid = p.contains("m_grid") ? vec_param(p, "m_grid") : Vec{-2, -1, 0, 1, 2};
    int n_max = iparam_or(p, "n_values", 5);
    BaseCertificate cert;
    cert.a1 = cert.a2 = 4.0;  // symmetric two-measure gaussian constant
    cert.provenance = BaseCertificate::Provenance::known_closed_form;
    for (double m1 : m_grid)
      for (double m2 : m_grid)
        for (int n = 1; n <= n_max; ++n) {
          auto rep = verify_talagrand_gaussian(m1, m2, n, cert);
          csv.add_row({"gaussian", fmt(m1), fmt(m2), CsvWriter::format(n), fmt(rep.lhs),
                       fmt(rep.rhs), fmt(rep.margin), rep.violated ? "1" : "0", "0"});
          if (rep.violated) ++violated;
        }
  } else {
    int k = p.at("k").get<int>();
    int cap = p.at("mass_cap").get<int>();
    auto mu = probability_param(p, "mu");
    auto kappa = probability_param(p, "kappa");
    int cert_samples = iparam_or(p, "certificate_samples", 200);
    double inflation = param_or(p, "certificate_inflation", 1.1);
    int instances = iparam_or(p, "instances", 10);
    auto idx = make_index(k, cap);
    GroundSpace space = hamming_space(k);
    RngStream cert_rng(ctx.seed, 999);
    Mat rho = CostFunction::hamming().matrix(space);
    auto est =
        estimate_base_constant(mu, BaseCostKind::linear, nullptr, rho, cert_samples, cert_rng);
    BaseCertificate cert;
    cert.a1 = cert.a2 = est.estimate * inflation;
    cert.provenance = BaseCertificate::Provenance::estimated;
    cert.samples = cert_samples;
    ctx.report["certificate"] = {{"constant", cert.a1},
                                 {"samples", cert_samples},
                                 {"note", "empirical lower bound, inflated"}};
    for (int i = 0; i < instances; ++i) {
      RngStream rng(ctx.seed, static_cast<std::uint64_t>(i));
      Vec w1(static_cast<std::size_t>(k)), w2(static_cast<std::size_t>(k));
      auto draw = [&](Vec& w) {
        double tot = 0.0;
        for (auto& x : w) {
          x = 0.05 - std::log(1.0 - rng.uniform01());
          tot += x;
        }
        for (auto& x : w) x /= tot;
        double c = 0.0;
        for (double x : w) c += x;
        w.back() += 1.0 - c;
      };
      draw(w1);
      draw(w2);
      auto p1 = mixed_binomial_law(DiscreteMeasure::probability(w1), kappa, idx);
      auto p2 = mixed_binomial_law(DiscreteMeasure::probability(w2), kappa, idx);
      auto rep =
          verify_talagrand_process(cert, CostFunction::hamming(), space, mu, kappa, p1, p2);
      csv.add_row({"finite", CsvWriter::format(i), "0", "0", fmt(rep.lhs), fmt(rep.rhs),
                   fmt(rep.margin), rep.violated ? "1" : "0", rep.vacuous ? "1" : "0"});
      if (rep.violated) ++violated;
      if (i == 0) {
        // optimal lifted coupling of the first instance, by configuration index
        auto lc = lifted_linear_cost(CostFunction::hamming(), space, p1, p2);
        CsvWriter cc({"source_index", "target_index", "weight"});
        if (lc.finite)
          for (int a = 0; a < idx->size(); ++a)
            for (int b = 0; b < idx->size(); ++b) {
              double wgt = lc.coupling[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
              if (wgt > 0.0)
                cc.add_row({CsvWriter::format(a), CsvWriter::format(b), fmt(wgt)});
            }
        ctx.emit_csv("lifted_coupling.csv", cc);
      }
    }
  }
  ctx.violations += violated;
  ctx.emit_csv("talagrand.csv", csv);
  ctx.report["summary"] = {{"violations", violated}};
}

// ---- experiment: concentration -------------------------------------------------------

void validate_concentration(const json& p) {
  require_known_keys(p,
                     {"mode", "k", "mass_cap", "intensity", "mass_level", "t", "r_grid", "radius",
                      "rate", "box", "delta", "beta", "n_samples"},
                     "concentration params");
  if (!p.contains("mode")) throw InputError("need mode: two-set|pair-deviation");
  std::string mode = p.at("mode").get<std::string>();
  if (mode != "two-set" && mode != "pair-deviation")
    throw InputError("mode must be two-set|pair-deviation");
}

void run_concentration(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  std::string mode = p.at("mode").get<std::string>();
  if (mode == "two-set") {
    int k = iparam_or(p, "k", 2);
    int cap = iparam_or(p, "mass_cap", 4);
    Vec intensity =
        p.contains("intensity") ? vec_param(p, "intensity") : Vec(static_cast<std::size_t>(k), 0.5);
    int level = iparam_or(p, "mass_level", 1);
    double t = param_or(p, "t", 0.5);
    Vec r_grid = p.contains("r_grid") ? vec_param(p, "r_grid") : Vec{0.25, 0.5, 1.0, 2.0};
    auto idx = make_index(k, cap);
    auto law = poisson_law(DiscreteMeasure::weights(intensity), idx);
    TargetSet A;
    for (int i = 0; i < idx->size(); ++i)
      if (idx->config(i).total_mass() <= level) A.members.push_back(idx->config(i));
    auto rep = two_set_experiment(law, A, t, r_grid);
    CsvWriter csv({"bound", "r", "p_A", "p_outside", "lhs", "rhs", "violated"});
    for (auto& row : rep.product_bound) {
      csv.add_row({"product", fmt(row.r), fmt(row.p_A), fmt(row.p_complement), fmt(row.lhs),
                   fmt(row.bound), row.violated ? "1" : "0"});
      if (row.violated) ++ctx.violations;
    }
    for (auto& row : rep.distance_bound) {
      csv.add_row({"distance", fmt(row.r), fmt(row.p_A), fmt(row.p_complement), fmt(row.lhs),
                   fmt(row.bound), row.violated ? "1" : "0"});
      if (row.violated) ++ctx.violations;
    }
    ctx.emit_csv("two_set.csv", csv);
    ctx.report["summary"] = {{"violations", ctx.violations},
                             {"truncation_tail", rep.truncation_tail}};
  } else {
    PairDeviationConfig cfg;
    cfg.radius = param_or(p, "radius", 0.2);
    cfg.rate = param_or(p, "rate", 20.0);
    if (p.contains("box")) {
      cfg.box.clear();
      for (auto& side : p.at("box"))
        cfg.box.push_back({side.at(0).get<double>(), side.at(1).get<double>()});
    }
    cfg.delta = param_or(p, "delta", 16.0);
    cfg.beta = param_or(p, "beta", 1.5);
    cfg.n_samples = iparam_or(p, "n_samples", 10000);
    cfg.seed = ctx.seed;
    if (p.contains("r_grid")) cfg.r_grid = vec_param(p, "r_grid");
    auto rep = pair_deviation_experiment(cfg);
    CsvWriter csv({"r", "upper_emp", "upper_emp_lcl", "upper_bound", "lower_emp", "lower_emp_lcl",
                   "lower_bound", "violated"});
    for (auto& row : rep.rows) {
      csv.add_row({fmt(row.r), fmt(row.upper_emp), fmt(row.upper_emp_lcl), fmt(row.upper_bound),
                   fmt(row.lower_emp), fmt(row.lower_emp_lcl), fmt(row.lower_bound),
                   row.violated ? "1" : "0"});
      if (row.violated) ++ctx.violations;
    }
    ctx.emit_csv("pair_deviation.csv", csv);
    ctx.report["summary"] = {{"hypothesis_ok", rep.hypothesis_ok},
                             {"hypothesis_violations", rep.hypothesis_violations},
                             {"median", rep.median},
                             {"median_ci", {rep.median_ci_low, rep.median_ci_high}},
                             {"violations", ctx.violations}};
  }
}

// ---- experiment: logsob ----------------------------------------------------------------

void validate_logsob(const json& p) {
  require_known_keys(p,
                     {"mode", "k", "mass_cap", "intensity", "lambdas", "num_functionals",
                      "f_bound", "tolerance", "rate", "box", "lambda", "n_samples"},
                     "logsob params");
  if (p.contains("mode")) {
    std::string mode = p.at("mode").get<std::string>();
    if (mode != "rc" && mode != "monotone") throw InputError("mode must be rc|monotone");
  }
}

void run_logsob(RunContext& ctx) {
  const json& p = ctx.config.at("params");
  std::string mode = p.contains("mode") ? p.at("mode").get<std::string>() : "rc";
  if (mode == "rc") {
    int k = iparam_or(p, "k", 2);
    int cap = iparam_or(p, "mass_cap", 4);
    Vec intensity =
        p.contains("intensity") ? vec_param(p, "intensity") : Vec(static_cast<std::size_t>(k), 0.5);
    Vec lambdas = p.contains("lambdas") ? vec_param(p, "lambdas") : Vec{0.25, 0.5, 0.75};
    int num_f = iparam_or(p, "num_functionals", 20);
    double bound = param_or(p, "f_bound", 2.0);
    double tol = param_or(p, "tolerance", 1e-4);
    auto idx = make_index(k, cap);
    auto law = poisson_law(DiscreteMeasure::weights(intensity), idx);

    struct Row {
      int f;
      double lambda, lhs, rhs, margin;
      bool violated;
    };
    std::vector<std::vector<Row>> rows(static_cast<std::size_t>(num_f));
    std::atomic<int> fails{0};
    for_each_ordered(ctx.jobs, num_f, [&](int i) {
      RngStream rng(ctx.seed, static_cast<std::uint64_t>(i));
      auto values = std::make_shared<Vec>(static_cast<std::size_t>(idx->size()));
      for (auto& v : *values) v = bound * rng.uniform01();
      const ConfigurationSpaceIndex* ip = idx.get();
      Functional F{[values, ip](const Configuration& xi) {
                     return (*values)[static_cast<std::size_t>(ip->index_of(xi))];
                   },
                   false, false};
      for (double lambda : lambdas) {
        try {
          auto rep = verify_logsob_Rc(law, F, lambda, tol);
          rows[static_cast<std::size_t>(i)].push_back(
              {i, lambda, rep.lhs, rep.rhs, rep.margin, rep.violated});
        } catch (const SolverFailure&) {
          fails.fetch_add(1);
        }
      }
    });
    ctx.solver_failures += fails.load();
    CsvWriter csv({"functional", "lambda", "lhs", "rhs", "margin", "violated"});
    int violated = 0;
    for (auto& batch : rows)
      for (auto& r : batch) {
        csv.add_row({CsvWriter::format(r.f), fmt(r.lambda), fmt(r.lhs), fmt(r.rhs), fmt(r.margin),
                     r.violated ? "1" : "0"});
        if (r.violated) ++violated;
      }
    ctx.violations += violated;
    ctx.emit_csv("logsob.csv", csv);
    ctx.report["summary"] = {{"violations", violated}, {"truncation_tail", law.tail_bound}};
  } else {
    MonotoneLogSobConfig cfg;
    cfg.rate = param_or(p, "rate", 1.0);
    if (p.contains("box")) {
      cfg.box.clear();
      for (auto& side : p.at("box"))
        cfg.box.push_back({side.at(0).get<double>(), side.at(1).get<double>()});
    }
    cfg.lambda = param_or(p, "lambda", 0.5);
    cfg.n_samples = iparam_or(p, "n_samples", 20000);
    cfg.seed = ctx.seed;
    Functional mass{[](const Configuration& xi) { return static_cast<double>(xi.total_mass()); },
                    true, true};
    auto rep = verify_logsob_monotone(cfg, mass);
    auto wu = cfg;
    wu.use_wu = true;
    auto rep_wu = verify_logsob_monotone(wu, mass);
    CsvWriter csv({"variant", "lambda", "lhs", "rhs", "lhs_ci_low", "rhs_ci_high", "violated"});
    csv.add_row({"phi_lambda", fmt(cfg.lambda), fmt(rep.lhs), fmt(rep.rhs),
                 fmt(rep.diagnostics.at("lhs_ci_low")), fmt(rep.diagnostics.at("rhs_ci_high")),
                 rep.violated ? "1" : "0"});
    csv.add_row({"phi_wu", fmt(cfg.lambda), fmt(rep_wu.lhs), fmt(rep_wu.rhs),
                 fmt(rep_wu.diagnostics.at("lhs_ci_low")),
                 fmt(rep_wu.diagnostics.at("rhs_ci_high")), rep_wu.violated ? "1" : "0"});
    if (rep.violated) ++ctx.violations;
    if (rep_wu.violated) ++ctx.violations;
    ctx.emit_csv("logsob_monotone.csv", csv);
    ctx.report["summary"] = {{"violations", ctx.violations}};
  }
}

// ---- dispatch ----------------------------------------------------------------

void validate_config(const json& cfg) {
  require_known_keys(cfg, {"experiment", "seed", "params"}, "config");
  if (!cfg.contains("experiment")) throw InputError("config needs an experiment kind");
  std::string kind = cfg.at("experiment").get<std::string>();
  const json params = cfg.contains("params") ? cfg.at("params") : json::object();
  if (kind == "transport")
    validate_transport(params);
  else if (kind == "laws")
    validate_laws(params);
  else if (kind == "verify-dembo")
    validate_dembo(params);
  else if (kind == "verify-marton")
    validate_marton(params);
  else if (kind == "verify-talagrand")
    validate_talagrand(params);
  else if (kind == "concentration")
    validate_concentration(params);
  else if (kind == "logsob")
    validate_logsob(params);
  else
    throw InputError("unknown experiment kind: " + kind);
}

int run_config(RunContext& ctx) {
  std::string kind = ctx.config.at("experiment").get<std::string>();
  std::filesystem::create_directories(ctx.out_dir);
  try {
    if (kind == "transport")
      run_transport(ctx);
    else if (kind == "laws")
      run_laws(ctx);
    else if (kind == "verify-dembo")
      run_dembo(ctx);
    else if (kind == "verify-marton")
      run_marton(ctx);
    else if (kind == "verify-talagrand")
      run_talagrand(ctx);
    else if (kind == "concentration")
      run_concentration(ctx);
    else if (kind == "logsob")
      run_logsob(ctx);
  } catch (const SolverFailure& e) {
    ctx.report["error"] = std::string("solver failure: ") + e.what();
    ctx.report["solver"] = {{"best_value", e.best_value}, {"gap", e.gap}, {"residual", e.residual}};
    write_json_file((ctx.out_dir / "report.json").string(), ctx.report);
    return kExitSolver;
  }

  ctx.report["experiment"] = kind;
  ctx.report["config_hash"] = ctx.config_hash;
  ctx.report["seed"] = ctx.seed;
  ctx.report["violations"] = ctx.violations;
  ctx.report["solver_failures"] = ctx.solver_failures;
  ctx.report["outputs"] = ctx.outputs;
  write_json_file((ctx.out_dir / "report.json").string(), ctx.report);

  if (ctx.solver_failures > 0) return kExitSolver;
  return ctx.violations > 0 ? kExitViolations : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point-process transport costs and inequality verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed_override = 0;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run an experiment from a json config");
  run->add_option("config", config_path, "experiment config (json)")->required();
  auto* seed_opt = run->add_option("--seed", seed_override, "override the config seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "parallel instances")->check(CLI::Range(1, 64));

  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", config_path, "experiment config (json)")->required();

  CLI11_PARSE(app, argc, argv);

  json cfg;
  try {
    cfg = load_json_file(config_path);
    validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (validate->parsed()) {
    std::cout << "ok: " << fnv1a_hex(cfg.dump()) << "\n";
    return kExitOk;
  }

  RunContext ctx;
  ctx.config = cfg;
  ctx.config_hash = fnv1a_hex(cfg.dump());
  ctx.seed = seed_opt->count() > 0
                 ? seed_override
                 : (cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 0);
  ctx.out_dir = out_dir;
  ctx.jobs = jobs;
  try {
    return run_config(ctx);
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
