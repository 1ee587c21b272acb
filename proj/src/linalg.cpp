#include "rawls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rawls {

namespace {

constexpr double kGramRcondFloor = 1e-8;
constexpr int kRefinementSteps = 2;

void require_dims(std::size_t rows, std::size_t cols, const char* what) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument(std::string(what) + ": dimensions must be at least 1");
  }
}

}  // namespace

std::string to_string(DesignKind kind) {
  return kind == DesignKind::gaussian ? "gaussian" : "bernoulli";
}

DesignKind parse_design_kind(const std::string& name) {
  if (name == "gaussian") return DesignKind::gaussian;
  if (name == "bernoulli") return DesignKind::bernoulli;
  throw std::invalid_argument("unknown design kind '" + name + "'");
}

Vector TernarySignal::dense() const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < support.size(); ++i) {
    out(static_cast<Eigen::Index>(support[i])) = signs[i];
  }
  return out;
}

DesignMatrix sample_gaussian_design(std::size_t rows, std::size_t cols, const Seed& seed) {
  require_dims(rows, cols, "sample_gaussian_design");
  Stream stream(seed);
  DesignMatrix out{Matrix(rows, cols), DesignKind::gaussian};
  for (Eigen::Index i = 0; i < out.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.entries.cols(); ++j) out.entries(i, j) = stream.normal();
  }
  return out;
}

DesignMatrix sample_bernoulli_design(std::size_t rows, std::size_t cols, const Seed& seed) {
  require_dims(rows, cols, "sample_bernoulli_design");
  Stream stream(seed);
  DesignMatrix out{Matrix(rows, cols), DesignKind::bernoulli};
  for (Eigen::Index i = 0; i < out.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.entries.cols(); ++j) out.entries(i, j) = stream.sign();
  }
  return out;
}

DesignMatrix sample_design(DesignKind kind, std::size_t rows, std::size_t cols, const Seed& seed) {
  return kind == DesignKind::gaussian ? sample_gaussian_design(rows, cols, seed)
                                      : sample_bernoulli_design(rows, cols, seed);
}

TernarySignal sample_ternary_signal(std::size_t dim, std::size_t sparsity, const Seed& seed) {
  if (sparsity > dim) {
    throw std::invalid_argument("sample_ternary_signal: sparsity " + std::to_string(sparsity) +
                                " exceeds dimension " + std::to_string(dim));
  }
  Stream stream(seed);
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  TernarySignal out;
  out.dim = dim;
  out.support.reserve(sparsity);
  std::sample(all.begin(), all.end(), std::back_inserter(out.support), sparsity, stream);
  std::sort(out.support.begin(), out.support.end());
  out.signs.reserve(sparsity);
  for (std::size_t i = 0; i < sparsity; ++i) out.signs.push_back(stream.sign());
  return out;
}

MeasurementSet measure(const DesignMatrix& design, const TernarySignal& theta, double sigma,
                       const Seed& seed) {
  if (design.cols() != theta.dim) {
    throw std::invalid_argument("measure: design has " + std::to_string(design.cols()) +
                                " columns but signal dimension is " + std::to_string(theta.dim));
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("measure: sigma must be nonnegative");
  MeasurementSet out;
  out.noise_sigma = sigma;
  out.values = Vector::Zero(design.entries.rows());
  for (std::size_t i = 0; i < theta.support.size(); ++i) {
    out.values += theta.signs[i] * design.entries.col(static_cast<Eigen::Index>(theta.support[i]));
  }
  if (sigma > 0.0) {
    Stream stream(seed);
    for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values(i) += sigma * stream.normal();
  }
  return out;
}

MinNormSolver::MinNormSolver(MatrixRef block, std::optional<double> tol) : block_(block) {
  require_dims(rows(), cols(), "min_norm_solve");
  if (rows() <= cols() && !tol) {
    Matrix gram = Matrix::Zero(block_.rows(), block_.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(block_);
    Eigen::LLT<Matrix> llt(gram.selfadjointView<Eigen::Lower>());
    if (llt.info() == Eigen::Success && llt.rcond() > kGramRcondFloor) {
      gram_.emplace(std::move(llt));
      return;
    }
  }
  init_svd(tol);
}

void MinNormSolver::init_svd(std::optional<double> tol) {
  Eigen::BDCSVD<Matrix> svd(block_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff =
      tol ? *tol
          : static_cast<double>(std::max(rows(), cols())) * std::numeric_limits<double>::epsilon() *
                (sigma.size() > 0 ? sigma(0) : 0.0);
  inv_sigma_.resize(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    inv_sigma_(i) = sigma(i) > cutoff ? 1.0 / sigma(i) : 0.0;
  }
  svd_u_ = svd.matrixU();
  svd_v_ = svd.matrixV();
}

Vector MinNormSolver::solve(VectorRef rhs) const {
  if (static_cast<std::size_t>(rhs.size()) != rows()) {
    throw std::invalid_argument("min_norm_solve: right-hand side has " +
                                std::to_string(rhs.size()) + " entries, expected " +
                                std::to_string(rows()));
  }
  if (gram_) {
    Vector theta = block_.transpose() * gram_->solve(rhs);
    for (int step = 0; step < kRefinementSteps; ++step) {
      const Vector residual = rhs - block_ * theta;
      theta += block_.transpose() * gram_->solve(residual);
    }
    return theta;
  }
  const Vector coeffs = inv_sigma_.cwiseProduct(svd_u_.transpose() * rhs);
  return svd_v_ * coeffs;
}

Vector min_norm_solve(MatrixRef block, VectorRef rhs, std::optional<double> tol) {
  return MinNormSolver(block, tol).solve(rhs);
}

Vector row_space_project(MatrixRef block, VectorRef v) {
  if (block.cols() != v.size()) {
    throw std::invalid_argument("row_space_project: vector length does not match columns");
  }
  return MinNormSolver(block).project(v);
}

SingularExtremes singular_extremes(MatrixRef matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw std::invalid_argument("singular_extremes: empty matrix");
  }
  Eigen::BDCSVD<Matrix> svd(matrix);
  const Vector& sigma = svd.singularValues();
  return {sigma(sigma.size() - 1), sigma(0)};
}

Matrix select_rows(MatrixRef matrix, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), matrix.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = matrix.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Vector select_entries(VectorRef vector, const std::vector<std::size_t>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = vector(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace rawls
