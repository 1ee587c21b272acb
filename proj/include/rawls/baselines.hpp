#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rawls/estimator.hpp"
#include "rawls/linalg.hpp"

namespace rawls::baselines {

struct LassoConfig {
  double lambda = 0.0;
  std::size_t max_iters = 10000;
  double rel_tol = 1e-9;

  /// lambda = sigma * sqrt(2 ln D).
  static LassoConfig defaults(double sigma, std::size_t cols);
  void validate() const;
};

struct Irl1Config {
  std::size_t outer_iters = 5;
  double epsilon = 1e-3;
  LassoConfig inner;

  void validate() const;
};

struct RandOmpConfig {
  std::size_t runs = 100;
  /// Selection weight exp(c * corr^2). +infinity selects the argmax.
  double temperature = 1.0;
  Seed seed;

  /// J = 100, c = min(1 / (2 sigma^2), 50).
  static RandOmpConfig defaults(double sigma, Seed seed);
  void validate() const;
};

/// Per-iteration record of a greedy pursuit.
struct PursuitTrace {
  std::vector<std::size_t> selected;
  std::vector<double> residual_norms;  ///< after each refit; front() is ||y||
  Vector coefficients;                 ///< refit coefficients aligned with `selected`
};

PursuitTrace omp_traced(MatrixRef design, VectorRef measurements, std::size_t sparsity);
SupportEstimate omp(MatrixRef design, VectorRef measurements, std::size_t sparsity);

SupportEstimate rand_omp(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                         const RandOmpConfig& config);

struct LassoResult {
  Vector theta;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective;  ///< filled only when requested
};

/// ISTA on 1/2 ||y - X theta||^2 + lambda ||theta||_1 with step 1/sigma_max(X)^2.
LassoResult lasso_solve(MatrixRef design, VectorRef measurements, const LassoConfig& config,
                        bool record_objective = false);
double lasso_objective(MatrixRef design, VectorRef measurements, VectorRef theta, double lambda);

/// Largest |theta| first; entries with equal |theta| (notably zeros) are
/// ordered by |X^T y|, then by index. Zero coefficients get sign +1.
SupportEstimate top_k_support(VectorRef theta, VectorRef correlations, std::size_t sparsity);

SupportEstimate lasso_topk(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                           const LassoConfig& config);

/// Reweighted l1: weights 1 / (|theta_i| + eps), starting from uniform
/// weights; each weighted problem is a LASSO on the column-rescaled design.
Vector irl1_solve(MatrixRef design, VectorRef measurements, const Irl1Config& config);
SupportEstimate irl1(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                     const Irl1Config& config);

}  // namespace rawls::baselines
