#pragma once

#include <cstddef>
#include <vector>

#include "rawls/estimator.hpp"
#include "rawls/linalg.hpp"
#include "rawls/random.hpp"

namespace rawls::theory {

struct BoundPoint {
  std::size_t n = 0;
  std::size_t N = 0;
  std::size_t D = 0;
  double theorem1_value = 0.0;  ///< n / (sqrt(N) sqrt(D-2)) + n / D
  double rescaled_value = 0.0;  ///< sqrt(D) / sqrt(N) + 1
};

/// Averaging error bound with the implicit constant taken as 1. Requires D >= 3.
BoundPoint theorem1_bound(std::size_t n, std::size_t N, std::size_t D);

/// n / (sqrt(N) sqrt(D-2)): the averaged Gaussian-term bound.
double lemma2_bound(std::size_t n, std::size_t N, std::size_t D);

/// || (1/m) sum pi_{A_i} theta - (1/m) sum thetahat_{A_i} || where
/// thetahat_A solves X_A theta = (X theta + omega)_A in minimum norm.
double aggregate_projection_error(MatrixRef design, VectorRef theta, VectorRef noise,
                                  const std::vector<SubsetIndex>& subsets);

/// thetahat_A = projection + gaussian_term + residual_e.
struct Lemma1Decomposition {
  Vector projection;     ///< pi_A theta
  Vector gaussian_term;  ///< sum_a g_a omega_a / ||g_a||^2
  Vector residual_e;
  Vector estimate;       ///< thetahat_A
};

/// Requires a full-row-rank block with fewer rows than columns; throws
/// NumericalDegeneracy otherwise.
Lemma1Decomposition lemma1_decompose(MatrixRef block, VectorRef theta, VectorRef noise);

/// Largest relative violation over rows a of
///   <g_a, e> = - sum_{i != a} <g_a, g_i> omega_i / ||g_i||^2.
/// Row a is scaled by the larger of sum_{i != a} |<g_a,g_i> omega_i| / ||g_i||^2
/// and |<g_a, theta>| + |omega_a|.
double lemma1_identity_error(MatrixRef block, VectorRef noise, const Lemma1Decomposition& parts);

/// sum_a <g_a, e>^2.
double lemma1_row_energy(MatrixRef block, const Lemma1Decomposition& parts);

struct Lemma1Check {
  double mean_row_energy = 0.0;  ///< Monte Carlo mean of sum_a <g_a, e>^2
  double exact = 0.0;            ///< n (n-1) / (D-2)
  double max_identity_error = 0.0;
};

/// Fresh Gaussian rows, Gaussian theta and unit noise per trial.
Lemma1Check lemma1_moment_check(std::size_t n, std::size_t D, std::size_t trials, const Seed& seed);

struct MomentCheck {
  double empirical = 0.0;
  double exact = 0.0;
};

struct Lemma2Check {
  double empirical_sq_mean = 0.0;  ///< Monte Carlo E ||v||^2
  double exact = 0.0;              ///< N / (D-2)
  double empirical_norm_mean = 0.0;  ///< Monte Carlo E ||v||
  /// sqrt(N / (D-2)); times n/N this is lemma2_bound(n, N, D).
  double norm_bound = 0.0;
};

/// v = sum_{a=1}^N g_a omega_a / ||g_a||^2 with Gaussian rows and unit noise.
Lemma2Check lemma2_moment_check(std::size_t N, std::size_t D, std::size_t trials, const Seed& seed);

/// E 1/||g||^2 for g standard Gaussian in R^D versus 1 / (D-2).
MomentCheck inverse_chi_mean_check(std::size_t D, std::size_t trials, const Seed& seed);

}  // namespace rawls::theory
