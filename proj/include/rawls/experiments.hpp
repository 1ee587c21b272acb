#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rawls/estimator.hpp"
#include "rawls/linalg.hpp"
#include "rawls/random.hpp"

namespace rawls::experiments {

enum class SweepKind { over_N, over_k, over_n };

/// "N", "k" or "n": the column header value used in curve CSVs.
std::string sweep_name(SweepKind kind);
/// Accepts "over_N"/"N", "over_k"/"k", "over_n"/"n".
SweepKind parse_sweep_kind(const std::string& text);

/// Knobs for the registered methods. Unset optionals take the per-method
/// defaults, which depend on the instance (sigma, N, D).
struct MethodOptions {
  std::optional<std::size_t> rawls_n;
  std::size_t rawls_m = 100;
  std::optional<double> lasso_lambda;
  std::size_t lasso_max_iters = 10000;
  double lasso_rel_tol = 1e-9;
  std::size_t irl1_outer = 5;
  double irl1_epsilon = 1e-3;
  std::size_t randomp_runs = 100;
  std::optional<double> randomp_temperature;
};

struct ExperimentSpec {
  std::size_t D = 64;
  SweepKind sweep = SweepKind::over_N;
  std::vector<std::size_t> values;
  std::size_t k = 10;  ///< used unless sweeping over k
  std::size_t N = 40;  ///< used unless sweeping over N
  double sigma = 0.5;
  DesignKind design = DesignKind::gaussian;
  std::size_t trials_per_point = 100;
  std::vector<std::string> methods;
  std::uint64_t master_seed = 0;
  MethodOptions options;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// "rawls", "omp", "randomp", "lasso", "irl1".
const std::vector<std::string>& registered_methods();
bool is_registered(const std::string& method);

struct Problem {
  DesignMatrix design;
  TernarySignal truth;
  MeasurementSet measurements;
};

/// X, theta* and the noise come from seed.child(Role::design|signal|noise).
Problem make_problem(std::size_t N, std::size_t D, std::size_t k, double sigma, DesignKind kind,
                     const Seed& seed);

/// FNV-1a over the bytes of X, theta* and y.
std::uint64_t fingerprint(const Problem& problem);

/// Support-set equality; signs are ignored.
bool is_success(const TernarySignal& truth, const SupportEstimate& estimate);

/// Runs a registered method on one instance. `rawls_n` overrides the subset
/// size for "rawls" (used by subset-size sweeps).
SupportEstimate run_method(const std::string& method, const Problem& problem, std::size_t k,
                           const MethodOptions& options, const Seed& seed,
                           std::optional<std::size_t> rawls_n = std::nullopt);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval; z defaults to the two-sided 95% quantile.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct CurvePoint {
  std::size_t sweep_value = 0;
  std::string method;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct SuccessCurve {
  std::string sweep_name;
  std::uint64_t master_seed = 0;
  std::vector<CurvePoint> points;  ///< sweep-value major, then spec method order

  bool operator==(const SuccessCurve&) const = default;
  const CurvePoint* find(std::size_t sweep_value, const std::string& method) const;
};

struct TrialOutcome {
  std::size_t point_index = 0;
  std::size_t trial = 0;
  std::string method;
  std::uint64_t instance_fingerprint = 0;
  bool success = false;
  bool failed = false;
  std::string error;
};

/// Instance seed for (D, N, k, trial): every method at that trial index sees
/// the same instance, and subset-size sweeps reuse instances across n.
Seed instance_seed(std::uint64_t master, std::size_t D, std::size_t N, std::size_t k,
                   std::size_t trial);

/// Method failures count as non-successes and are reported on std::clog.
/// When `outcomes` is given it receives every (point, trial, method) record
/// in deterministic order.
SuccessCurve run_success_curve(const ExperimentSpec& spec, std::size_t workers = 1,
                               std::vector<TrialOutcome>* outcomes = nullptr);

enum class ThetaMode { gaussian, unit_gaussian };
std::string to_string(ThetaMode mode);
ThetaMode parse_theta_mode(const std::string& text);

struct BoundRow {
  std::size_t n = 0;
  std::size_t N = 0;
  std::size_t D = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  double empirical_error_mean = 0.0;
  double theorem1_bound = 0.0;
  std::vector<double> errors;  ///< per-trial errors, trial order
};

/// Per trial: Gaussian X (N x D), theta* per `mode`, unit noise; per n the
/// averaged projection error over m subsets, paired with the bound.
std::vector<BoundRow> run_bound_sweep(std::size_t D, std::size_t N,
                                      const std::vector<std::size_t>& n_list, std::size_t m,
                                      ThetaMode mode, std::size_t trials, const Seed& seed,
                                      std::size_t workers = 1);

}  // namespace rawls::experiments
