#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rawls/random.hpp"

namespace rawls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Raised when a factorization meets a (numerically) rank-deficient system
/// that the operation cannot handle.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DesignKind { gaussian, bernoulli };

std::string to_string(DesignKind kind);
DesignKind parse_design_kind(const std::string& name);

struct DesignMatrix {
  Matrix entries;
  DesignKind kind = DesignKind::gaussian;

  std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
};

/// Sparse vector in {-1, 0, 1}^dim stored as (sorted support, signs).
struct TernarySignal {
  std::size_t dim = 0;
  std::vector<std::size_t> support;
  std::vector<int> signs;

  std::size_t sparsity() const { return support.size(); }
  Vector dense() const;
};

struct MeasurementSet {
  Vector values;
  double noise_sigma = 0.0;
};

DesignMatrix sample_gaussian_design(std::size_t rows, std::size_t cols, const Seed& seed);
DesignMatrix sample_bernoulli_design(std::size_t rows, std::size_t cols, const Seed& seed);
DesignMatrix sample_design(DesignKind kind, std::size_t rows, std::size_t cols, const Seed& seed);

/// Support is a uniform k-subset of {0..dim-1}; signs are i.i.d. fair.
TernarySignal sample_ternary_signal(std::size_t dim, std::size_t sparsity, const Seed& seed);

/// y = X theta + sigma * g with g i.i.d. standard normal.
MeasurementSet measure(const DesignMatrix& design, const TernarySignal& theta, double sigma,
                       const Seed& seed);

/// Factorization of a wide block X_A that produces minimum-norm least-squares
/// solutions for any number of right-hand sides.
///
/// Uses the Gram system (X_A X_A^T) z = y, theta = X_A^T z, when the Cholesky
/// factor reports a reciprocal condition estimate above 1e-8; otherwise a
/// truncated SVD pseudo-inverse. The Gram path applies iterative refinement
/// against the original residual.
class MinNormSolver {
 public:
  /// `tol` overrides the SVD truncation threshold, which otherwise is
  /// max(n, D) * eps * sigma_max.
  explicit MinNormSolver(MatrixRef block, std::optional<double> tol = std::nullopt);

  Vector solve(VectorRef rhs) const;
  /// Orthogonal projection of v onto the row space of the block.
  Vector project(VectorRef v) const { return solve(block_ * v); }

  bool uses_gram() const { return gram_.has_value(); }
  std::size_t rows() const { return static_cast<std::size_t>(block_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(block_.cols()); }

 private:
  void init_svd(std::optional<double> tol);

  Matrix block_;
  std::optional<Eigen::LLT<Matrix>> gram_;
  // Truncated SVD factors: theta = V * diag(inv_sigma) * U^T y.
  Matrix svd_u_;
  Matrix svd_v_;
  Vector inv_sigma_;
};

/// argmin ||X_A theta - y_A||^2 of minimum Euclidean norm.
Vector min_norm_solve(MatrixRef block, VectorRef rhs, std::optional<double> tol = std::nullopt);

/// Orthogonal projection of v onto span of the rows of X_A.
Vector row_space_project(MatrixRef block, VectorRef v);

struct SingularExtremes {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Smallest and largest of the min(rows, cols) singular values.
SingularExtremes singular_extremes(MatrixRef matrix);

/// Rows (entries) listed in `rows`, in that order.
Matrix select_rows(MatrixRef matrix, const std::vector<std::size_t>& rows);
Vector select_entries(VectorRef vector, const std::vector<std::size_t>& rows);

}  // namespace rawls
