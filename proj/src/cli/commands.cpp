#include "rawls/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rawls/cli/report.hpp"
#include "rawls/estimator.hpp"
#include "rawls/experiments.hpp"
#include "rawls/linalg.hpp"
#include "rawls/theory.hpp"

namespace rawls::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 0;

std::size_t as_size(std::uint64_t v) { return static_cast<std::size_t>(v); }

std::size_t resolve_workers(const RunConfig& config) {
  if (const auto w = config.optional_uint("workers")) return std::max<std::size_t>(1, as_size(*w));
  if (const char* env = std::getenv("RAWLS_WORKERS"); env && *env) {
    RunConfig probe;
    probe.set("RAWLS_WORKERS", env);
    return std::max<std::size_t>(1, as_size(probe.uint("RAWLS_WORKERS", 1)));
  }
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

/// Runs `emit` against the `out` file when configured, else against `fallback`.
void emit_to(const RunConfig& config, std::ostream& fallback,
             const std::function<void(std::ostream&)>& emit) {
  if (!config.has("out")) {
    emit(fallback);
    return;
  }
  const std::string path = config.text("out", "");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  emit(file);
  if (!file) throw ConfigError("write to '" + path + "' failed");
}

void write_svg_file(const RunConfig& config, const PlotSpec& plot,
                    const std::vector<Series>& series) {
  if (!config.has("svg")) return;
  const std::string path = config.text("svg", "");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  write_svg_plot(file, plot, series);
}

std::vector<std::size_t> to_sizes(const std::vector<std::uint64_t>& values) {
  std::vector<std::size_t> out;
  out.reserve(values.size());
  for (const auto v : values) out.push_back(as_size(v));
  return out;
}

std::vector<std::uint64_t> arithmetic(std::uint64_t start, std::uint64_t stop, std::uint64_t step) {
  if (step == 0) throw ConfigError("n_step must be positive");
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

std::vector<std::uint64_t> default_sweep_values(experiments::SweepKind kind) {
  switch (kind) {
    case experiments::SweepKind::over_N:
      return {20, 30, 40, 50, 60, 70, 80, 90};
    case experiments::SweepKind::over_k:
      return {2, 4, 6, 8, 10, 12, 14, 16};
    case experiments::SweepKind::over_n:
      return {5, 10, 15, 20, 25, 30, 35, 40};
  }
  return {};
}

/// Parses leftover `--key value` / `--key=value` tokens.
void apply_overrides(const std::vector<std::string>& extras, RunConfig& config) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0 || token.size() == 2) {
      throw ConfigError("unexpected argument '" + token + "'");
    }
    const std::string body = token.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      config.set(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw ConfigError("missing value for '" + token + "'");
    config.set(body, extras[++i]);
  }
}

struct CheckRow {
  std::string name;
  std::string empirical;
  std::string reference;
  std::string criterion;
  bool pass = false;
};

}  // namespace

int cmd_recover(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::uint64_t master = config.uint("seed", kDefaultSeed);
  Matrix design;
  Vector measurements;
  std::size_t k = 0;
  if (config.has("input")) {
    Instance inst = read_instance_file(config.text("input", ""));
    const auto N = config.optional_uint("N");
    const auto D = config.optional_uint("D");
    if ((N && *N != static_cast<std::uint64_t>(inst.design.rows())) ||
        (D && *D != static_cast<std::uint64_t>(inst.design.cols()))) {
      throw ConfigError("dimension mismatch: instance is " + std::to_string(inst.design.rows()) +
                        "x" + std::to_string(inst.design.cols()) +
                        " but the config gives different N or D");
    }
    if (!config.has("k")) throw ConfigError("recover with an input file needs k");
    k = as_size(config.uint("k", 0));
    design = std::move(inst.design);
    measurements = std::move(inst.measurements);
  } else {
    const std::size_t N = as_size(config.uint("N", 80));
    const std::size_t D = as_size(config.uint("D", 64));
    k = as_size(config.uint("k", 16));
    const double sigma = config.real("sigma", 0.5);
    const DesignKind kind = parse_design_kind(config.text("design", "gaussian"));
    if (N < 1 || D < 1) throw ConfigError("N and D must be positive");
    if (k < 1 || k > D) throw ConfigError("k must lie in [1, D]");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be nonnegative");
    const auto problem = experiments::make_problem(N, D, k, sigma, kind,
                                                   experiments::instance_seed(master, D, N, k, 0));
    design = problem.design.entries;
    measurements = problem.measurements.values;
  }
  const auto cols = static_cast<std::size_t>(design.cols());
  if (k < 1 || k > cols) throw ConfigError("k must lie in [1, D]");

  RawlsConfig rc = RawlsConfig::defaults(static_cast<std::size_t>(design.rows()), cols,
                                         Seed(master).child(Role::method));
  if (const auto n = config.optional_uint("n")) rc.subset_size = as_size(*n);
  if (const auto m = config.optional_uint("m")) rc.subset_count = as_size(*m);
  if (rc.beyond_bound_regime(cols)) {
    err << "note: n=" << rc.subset_size << " is within 10% of D=" << cols
        << "; the averaging error grows sharply here\n";
  }

  const PeelTrace trace = rawls_peel_traced(design, measurements, k, rc);
  emit_to(config, out, [&](std::ostream& os) {
    write_recovery_json(os, trace.support, trace.aggregates.front());
  });
  return kExitOk;
}

int cmd_curve(const RunConfig& config, std::ostream& out, std::ostream&) {
  experiments::ExperimentSpec spec;
  spec.sweep = experiments::parse_sweep_kind(config.text("sweep", "over_N"));
  spec.values = to_sizes(config.uint_list("values", default_sweep_values(spec.sweep)));
  spec.D = as_size(config.uint("D", spec.D));
  spec.N = as_size(config.uint("N", spec.N));
  spec.k = as_size(config.uint("k", spec.k));
  spec.sigma = config.real("sigma", spec.sigma);
  spec.design = parse_design_kind(config.text("design", "gaussian"));
  spec.trials_per_point = as_size(config.uint("trials", spec.trials_per_point));
  spec.methods = config.text_list("methods", experiments::registered_methods());
  spec.master_seed = config.uint("seed", kDefaultSeed);

  auto& opt = spec.options;
  if (const auto v = config.optional_uint("rawls_n")) opt.rawls_n = as_size(*v);
  opt.rawls_m = as_size(config.uint("rawls_m", opt.rawls_m));
  opt.lasso_lambda = config.optional_real("lasso_lambda");
  opt.lasso_max_iters = as_size(config.uint("lasso_max_iters", opt.lasso_max_iters));
  opt.lasso_rel_tol = config.real("lasso_rel_tol", opt.lasso_rel_tol);
  opt.irl1_outer = as_size(config.uint("irl1_outer", opt.irl1_outer));
  opt.irl1_epsilon = config.real("irl1_epsilon", opt.irl1_epsilon);
  opt.randomp_runs = as_size(config.uint("randomp_runs", opt.randomp_runs));
  opt.randomp_temperature = config.optional_real("randomp_temperature");

  const auto curve = experiments::run_success_curve(spec, resolve_workers(config));
  emit_to(config, out, [&](std::ostream& os) { write_curve_csv(os, curve); });

  std::vector<Series> series;
  for (const auto& method : spec.methods) {
    Series s{method, {}, {}};
    for (const auto v : spec.values) {
      if (const auto* p = curve.find(v, method)) {
        s.x.push_back(static_cast<double>(v));
        s.y.push_back(p->rate);
      }
    }
    series.push_back(std::move(s));
  }
  write_svg_file(config,
                 {"Exact support recovery", curve.sweep_name, "success rate", false}, series);
  return kExitOk;
}

int cmd_bound(const RunConfig& config, std::ostream& out, std::ostream&) {
  const std::size_t D = as_size(config.uint("D", 10000));
  const std::size_t N = as_size(config.uint("N", 100));
  if (D < 3) throw std::invalid_argument("bound: requires D >= 3 (got D=" + std::to_string(D) + ")");
  std::vector<std::uint64_t> n_list;
  if (config.has("n_list")) {
    n_list = config.uint_list("n_list", {});
  } else {
    const std::uint64_t upper = std::min(N, D) > 1 ? std::min(N, D) - 1 : 1;
    n_list = arithmetic(config.uint("n_start", 1), config.uint("n_stop", upper),
                        config.uint("n_step", 5));
  }
  if (n_list.empty()) throw ConfigError("bound: empty subset-size grid");
  const std::size_t m = as_size(config.uint("m", 20));
  const auto mode = experiments::parse_theta_mode(config.text("theta", "gaussian"));
  const std::size_t trials = as_size(config.uint("trials", 20));
  const Seed seed = Seed(config.uint("seed", kDefaultSeed)).child(Role::instance);

  const auto rows = experiments::run_bound_sweep(D, N, to_sizes(n_list), m, mode, trials, seed,
                                                 resolve_workers(config));
  emit_to(config, out, [&](std::ostream& os) { write_bound_csv(os, rows); });

  Series empirical{"empirical", {}, {}};
  Series bound{"bound", {}, {}};
  for (const auto& r : rows) {
    empirical.x.push_back(static_cast<double>(r.n));
    empirical.y.push_back(r.empirical_error_mean);
    bound.x.push_back(static_cast<double>(r.n));
    bound.y.push_back(r.theorem1_bound);
  }
  write_svg_file(config, {"Averaging error vs subset size", "n", "error", true},
                 {empirical, bound});
  return kExitOk;
}

int cmd_lemma_check(const RunConfig& config, std::ostream& out, std::ostream&) {
  const std::size_t D = as_size(config.uint("D", 12));
  if (D < 3) {
    throw std::invalid_argument("lemma-check: requires D >= 3 (got D=" + std::to_string(D) + ")");
  }
  const std::size_t N = as_size(config.uint("N", 10));
  const std::size_t n = as_size(config.uint("n", std::min<std::uint64_t>(20, D - 1)));
  const std::size_t trials = as_size(config.uint("trials", 100000));
  const std::size_t lemma1_trials = as_size(config.uint("lemma1_trials", 500));
  const Seed root(config.uint("seed", kDefaultSeed));

  constexpr double kMomentTol = 0.05;
  constexpr double kLemma1Tol = 0.10;
  constexpr double kIdentityTol = 1e-6;
  auto within = [](double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::abs(want);
  };

  std::vector<CheckRow> rows;
  const auto chi = theory::inverse_chi_mean_check(D, trials, root.child(1));
  rows.push_back({"inverse_chi_mean", format_real(chi.empirical), format_real(chi.exact),
                  "rel 0.05", within(chi.empirical, chi.exact, kMomentTol)});

  const auto l2 = theory::lemma2_moment_check(N, D, trials, root.child(2));
  rows.push_back({"lemma2_moment", format_real(l2.empirical_sq_mean), format_real(l2.exact),
                  "rel 0.05", within(l2.empirical_sq_mean, l2.exact, kMomentTol)});
  rows.push_back({"lemma2_norm_bound", format_real(l2.empirical_norm_mean),
                  format_real(l2.norm_bound), "<= bound",
                  l2.empirical_norm_mean <= l2.norm_bound});

  const auto l1 = theory::lemma1_moment_check(n, D, lemma1_trials, root.child(3));
  rows.push_back({"lemma1_row_energy", format_real(l1.mean_row_energy), format_real(l1.exact),
                  "rel 0.10", within(l1.mean_row_energy, l1.exact, kLemma1Tol)});
  rows.push_back({"lemma1_identity", format_real(l1.max_identity_error), format_real(0.0),
                  "<= 1e-06", l1.max_identity_error <= kIdentityTol});

  bool all = true;
  emit_to(config, out, [&](std::ostream& os) {
    os << "# D=" << D << " N=" << N << " n=" << n << " trials=" << trials
       << " lemma1_trials=" << lemma1_trials << '\n';
    os << std::left << std::setw(20) << "check" << std::setw(26) << "empirical" << std::setw(26)
       << "exact" << std::setw(12) << "tolerance" << "status\n";
    for (const auto& r : rows) {
      all = all && r.pass;
      os << std::setw(20) << r.name << std::setw(26) << r.empirical << std::setw(26)
         << r.reference << std::setw(12) << r.criterion << (r.pass ? "PASS" : "FAIL") << '\n';
    }
  });
  return all ? kExitOk : kExitCheckFailed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse support recovery by randomly averaged least squares"};
  app.name("rawls");
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> workers;
    std::optional<std::string> out;
    std::optional<std::string> svg;
  };
  std::map<std::string, Flags> flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"recover", "Peel a support estimate from one instance (file or generated)"},
      {"curve", "Success-rate curve for the registered methods"},
      {"bound", "Averaging error against the analytic bound"},
      {"lemma-check", "Monte Carlo checks of the moment identities"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->allow_extras();
    auto& f = flags[name];
    sub->add_option("--config", f.config, "flat key = value file");
    sub->add_option("--seed", f.seed, "master seed (u64)");
    sub->add_option("--workers", f.workers, "worker threads (default RAWLS_WORKERS or all cores)");
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--svg", f.svg, "SVG plot path");
    sub->footer("Any schema key may be given as --key value.");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    if (!app.get_subcommands().empty()) out << app.get_subcommands().front()->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const Flags& f = flags[name];
  try {
    RunConfig config(name);
    if (!f.config.empty()) {
      for (const auto& [key, value] : read_config_file(f.config)) config.set(key, value);
    }
    apply_overrides(sub->remaining(), config);
    if (f.seed) config.set("seed", std::to_string(*f.seed));
    if (f.workers) config.set("workers", std::to_string(*f.workers));
    if (f.out) config.set("out", *f.out);
    if (f.svg) config.set("svg", *f.svg);
    config.validate(schema_for(name));

    if (name == "recover") return cmd_recover(config, out, err);
    if (name == "curve") return cmd_curve(config, out, err);
    if (name == "bound") return cmd_bound(config, out, err);
    return cmd_lemma_check(config, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace rawls::cli
