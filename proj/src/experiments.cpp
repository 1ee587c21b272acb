#include "rawls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <stdexcept>

#include "rawls/baselines.hpp"
#include "rawls/parallel.hpp"
#include "rawls/theory.hpp"

namespace rawls::experiments {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
}

std::uint64_t name_tag(const std::string& name) {
  std::uint64_t h = kFnvOffset;
  fnv_bytes(h, name.data(), name.size());
  return h;
}

struct PointShape {
  std::size_t N;
  std::size_t k;
  std::optional<std::size_t> rawls_n;
};

PointShape shape_at(const ExperimentSpec& spec, std::size_t value) {
  switch (spec.sweep) {
    case SweepKind::over_N:
      return {value, spec.k, spec.options.rawls_n};
    case SweepKind::over_k:
      return {spec.N, value, spec.options.rawls_n};
    case SweepKind::over_n:
      return {spec.N, spec.k, value};
  }
  throw std::logic_error("unreachable sweep kind");
}

}  // namespace

std::string sweep_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::over_N:
      return "N";
    case SweepKind::over_k:
      return "k";
    case SweepKind::over_n:
      return "n";
  }
  return "?";
}

SweepKind parse_sweep_kind(const std::string& text) {
  if (text == "over_N" || text == "N") return SweepKind::over_N;
  if (text == "over_k" || text == "k") return SweepKind::over_k;
  if (text == "over_n" || text == "n") return SweepKind::over_n;
  throw std::invalid_argument("unknown sweep '" + text + "' (expected over_N, over_k or over_n)");
}

const std::vector<std::string>& registered_methods() {
  static const std::vector<std::string> methods{"rawls", "omp", "randomp", "lasso", "irl1"};
  return methods;
}

bool is_registered(const std::string& method) {
  const auto& all = registered_methods();
  return std::find(all.begin(), all.end(), method) != all.end();
}

void ExperimentSpec::validate() const {
  if (D < 1) throw std::invalid_argument("experiment: D must be at least 1");
  if (values.empty()) throw std::invalid_argument("experiment: sweep has no values");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw std::invalid_argument("experiment: sweep values must be strictly increasing");
    }
  }
  if (trials_per_point < 1) throw std::invalid_argument("experiment: trials must be at least 1");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods listed");
  for (const auto& m : methods) {
    if (!is_registered(m)) throw std::invalid_argument("experiment: unknown method '" + m + "'");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("experiment: sigma must be nonnegative");
  for (const std::size_t v : values) {
    const PointShape shape = shape_at(*this, v);
    if (shape.N < 1) throw std::invalid_argument("experiment: N must be at least 1");
    if (shape.k > D) throw std::invalid_argument("experiment: k exceeds D");
    if (shape.rawls_n && (*shape.rawls_n < 1 || *shape.rawls_n > std::min(shape.N, D))) {
      throw std::invalid_argument("experiment: rawls subset size " + std::to_string(*shape.rawls_n) +
                                  " outside [1, min(N, D)]");
    }
  }
}

Problem make_problem(std::size_t N, std::size_t D, std::size_t k, double sigma, DesignKind kind,
                     const Seed& seed) {
  Problem p;
  p.design = sample_design(kind, N, D, seed.child(Role::design));
  p.truth = sample_ternary_signal(D, k, seed.child(Role::signal));
  p.measurements = measure(p.design, p.truth, sigma, seed.child(Role::noise));
  return p;
}

std::uint64_t fingerprint(const Problem& problem) {
  std::uint64_t h = kFnvOffset;
  const Matrix& x = problem.design.entries;
  fnv_bytes(h, x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
  fnv_bytes(h, problem.truth.support.data(), sizeof(std::size_t) * problem.truth.support.size());
  fnv_bytes(h, problem.truth.signs.data(), sizeof(int) * problem.truth.signs.size());
  const Vector& y = problem.measurements.values;
  fnv_bytes(h, y.data(), sizeof(double) * static_cast<std::size_t>(y.size()));
  return h;
}

bool is_success(const TernarySignal& truth, const SupportEstimate& estimate) {
  return estimate.sorted_indices() == truth.support;
}

SupportEstimate run_method(const std::string& method, const Problem& problem, std::size_t k,
                           const MethodOptions& options, const Seed& seed,
                           std::optional<std::size_t> rawls_n) {
  const Matrix& x = problem.design.entries;
  const Vector& y = problem.measurements.values;
  const double sigma = problem.measurements.noise_sigma;
  const std::size_t D = problem.design.cols();

  baselines::LassoConfig lasso = baselines::LassoConfig::defaults(sigma, D);
  if (options.lasso_lambda) lasso.lambda = *options.lasso_lambda;
  lasso.max_iters = options.lasso_max_iters;
  lasso.rel_tol = options.lasso_rel_tol;

  if (method == "rawls") {
    RawlsConfig cfg = RawlsConfig::defaults(problem.design.rows(), D, seed);
    if (rawls_n) cfg.subset_size = *rawls_n;
    cfg.subset_count = options.rawls_m;
    return rawls_peel(x, y, k, cfg);
  }
  if (method == "omp") return baselines::omp(x, y, k);
  if (method == "randomp") {
    baselines::RandOmpConfig cfg = baselines::RandOmpConfig::defaults(sigma, seed);
    cfg.runs = options.randomp_runs;
    if (options.randomp_temperature) cfg.temperature = *options.randomp_temperature;
    return baselines::rand_omp(x, y, k, cfg);
  }
  if (method == "lasso") return baselines::lasso_topk(x, y, k, lasso);
  if (method == "irl1") {
    baselines::Irl1Config cfg;
    cfg.outer_iters = options.irl1_outer;
    cfg.epsilon = options.irl1_epsilon;
    cfg.inner = lasso;
    return baselines::irl1(x, y, k, cfg);
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

const CurvePoint* SuccessCurve::find(std::size_t sweep_value, const std::string& method) const {
  for (const auto& p : points) {
    if (p.sweep_value == sweep_value && p.method == method) return &p;
  }
  return nullptr;
}

Seed instance_seed(std::uint64_t master, std::size_t D, std::size_t N, std::size_t k,
                   std::size_t trial) {
  return Seed(master).child(Role::instance).child(D).child(N).child(k).child(trial);
}

SuccessCurve run_success_curve(const ExperimentSpec& spec, std::size_t workers,
                               std::vector<TrialOutcome>* outcomes) {
  spec.validate();
  const std::size_t points = spec.values.size();
  const std::size_t trials = spec.trials_per_point;
  const std::size_t methods = spec.methods.size();
  std::vector<TrialOutcome> slots(points * trials * methods);

  parallel_for(points * trials, workers, [&](std::size_t task) {
    const std::size_t point = task / trials;
    const std::size_t trial = task % trials;
    const PointShape shape = shape_at(spec, spec.values[point]);
    const Seed seed = instance_seed(spec.master_seed, spec.D, shape.N, shape.k, trial);
    const Problem problem = make_problem(shape.N, spec.D, shape.k, spec.sigma, spec.design, seed);
    const std::uint64_t print = fingerprint(problem);
    for (std::size_t mi = 0; mi < methods; ++mi) {
      const std::string& method = spec.methods[mi];
      TrialOutcome& out = slots[task * methods + mi];
      out.point_index = point;
      out.trial = trial;
      out.method = method;
      out.instance_fingerprint = print;
      try {
        const SupportEstimate est =
            run_method(method, problem, shape.k, spec.options,
                       seed.child(Role::method).child(name_tag(method)), shape.rawls_n);
        out.success = is_success(problem.truth, est);
      } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
      }
    }
  });

  SuccessCurve curve;
  curve.sweep_name = sweep_name(spec.sweep);
  curve.master_seed = spec.master_seed;
  for (std::size_t point = 0; point < points; ++point) {
    for (std::size_t mi = 0; mi < methods; ++mi) {
      CurvePoint cp;
      cp.sweep_value = spec.values[point];
      cp.method = spec.methods[mi];
      cp.trials = trials;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        const TrialOutcome& o = slots[(point * trials + trial) * methods + mi];
        if (o.success) ++cp.successes;
        if (o.failed) {
          std::clog << "[rawls] " << o.method << " failed at " << curve.sweep_name << "="
                    << cp.sweep_value << " trial " << trial << ": " << o.error << '\n';
        }
      }
      cp.rate = static_cast<double>(cp.successes) / static_cast<double>(trials);
      const Interval ci = wilson_interval(cp.successes, trials);
      cp.ci_low = ci.low;
      cp.ci_high = ci.high;
      curve.points.push_back(cp);
    }
  }
  if (outcomes) *outcomes = std::move(slots);
  return curve;
}

std::string to_string(ThetaMode mode) {
  return mode == ThetaMode::gaussian ? "gaussian" : "unit_gaussian";
}

ThetaMode parse_theta_mode(const std::string& text) {
  if (text == "gaussian") return ThetaMode::gaussian;
  if (text == "unit_gaussian") return ThetaMode::unit_gaussian;
  throw std::invalid_argument("unknown theta mode '" + text +
                              "' (expected gaussian or unit_gaussian)");
}

std::vector<BoundRow> run_bound_sweep(std::size_t D, std::size_t N,
                                      const std::vector<std::size_t>& n_list, std::size_t m,
                                      ThetaMode mode, std::size_t trials, const Seed& seed,
                                      std::size_t workers) {
  if (D < 3) throw std::invalid_argument("bound sweep: requires D >= 3");
  if (N < 1 || m < 1 || trials < 1) {
    throw std::invalid_argument("bound sweep: N, m and trials must be at least 1");
  }
  if (n_list.empty()) throw std::invalid_argument("bound sweep: empty subset-size list");
  for (const std::size_t n : n_list) {
    if (n < 1 || n >= std::min(N, D)) {
      throw std::invalid_argument("bound sweep: subset size " + std::to_string(n) +
                                  " outside [1, min(N, D))");
    }
  }

  // errors[trial][point]
  std::vector<std::vector<double>> errors(trials, std::vector<double>(n_list.size()));
  parallel_for(trials, workers, [&](std::size_t trial) {
    const Seed ts = seed.child(trial);
    const Matrix x = sample_gaussian_design(N, D, ts.child(Role::design)).entries;
    Stream theta_stream(ts.child(Role::theta));
    Vector theta(static_cast<Eigen::Index>(D));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = theta_stream.normal();
    if (mode == ThetaMode::unit_gaussian) theta.normalize();
    Stream noise_stream(ts.child(Role::noise));
    Vector noise(static_cast<Eigen::Index>(N));
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = noise_stream.normal();
    for (std::size_t p = 0; p < n_list.size(); ++p) {
      const auto subsets = sample_subsets(N, n_list[p], m, ts.child(Role::subsets).child(n_list[p]));
      errors[trial][p] = theory::aggregate_projection_error(x, theta, noise, subsets);
    }
  });

  std::vector<BoundRow> rows;
  for (std::size_t p = 0; p < n_list.size(); ++p) {
    BoundRow row;
    row.n = n_list[p];
    row.N = N;
    row.D = D;
    row.m = m;
    row.trials = trials;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      row.errors.push_back(errors[t][p]);
      sum += errors[t][p];
    }
    row.empirical_error_mean = sum / static_cast<double>(trials);
    row.theorem1_bound = theory::theorem1_bound(row.n, N, D).theorem1_value;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rawls::experiments
