#pragma once

// Hand-rolled random case generators for property tests. They draw from
// std::mt19937_64 so cases are independent of the library's own streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double gaussian() { return normal_(rng_); }
  bool coin() { return (rng_() & 1u) != 0; }

  Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gaussian();
    return m;
  }

  Eigen::VectorXd gaussian_vector(std::size_t size) {
    Eigen::VectorXd v(size);
    for (auto& x : v) x = gaussian();
    return v;
  }

  /// Random orthonormal columns from a QR of a Gaussian matrix.
  Eigen::MatrixXd orthonormal(std::size_t rows, std::size_t cols) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rows, cols));
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  }

  /// rows x cols with singular values spread log-uniformly over [1/cond, 1].
  Eigen::MatrixXd conditioned(std::size_t rows, std::size_t cols, double cond) {
    const std::size_t r = std::min(rows, cols);
    Eigen::VectorXd s(r);
    for (std::size_t i = 0; i < r; ++i) {
      const double t = r == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r - 1);
      s(i) = std::pow(cond, -t);
    }
    return orthonormal(rows, r) * s.asDiagonal() * orthonormal(cols, r).transpose();
  }

  /// Sorted uniform k-subset of {0..n-1}.
  std::vector<std::size_t> subset(std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng_);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gen
