#include "rawls/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rawls::theory {

namespace {

void require_dimension(std::size_t D, const char* who) {
  if (D < 3) {
    throw std::invalid_argument(std::string(who) + ": requires D >= 3 (got D=" +
                                std::to_string(D) + ")");
  }
}

Vector gaussian_vector(Stream& stream, std::size_t size) {
  Vector out(static_cast<Eigen::Index>(size));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = stream.normal();
  return out;
}

}  // namespace

BoundPoint theorem1_bound(std::size_t n, std::size_t N, std::size_t D) {
  require_dimension(D, "theorem1_bound");
  if (n < 1 || N < 1) throw std::invalid_argument("theorem1_bound: n and N must be at least 1");
  const double nd = static_cast<double>(n);
  const double Nd = static_cast<double>(N);
  const double Dd = static_cast<double>(D);
  BoundPoint out;
  out.n = n;
  out.N = N;
  out.D = D;
  out.theorem1_value = nd / (std::sqrt(Nd) * std::sqrt(Dd - 2.0)) + nd / Dd;
  out.rescaled_value = std::sqrt(Dd) / std::sqrt(Nd) + 1.0;
  return out;
}

double lemma2_bound(std::size_t n, std::size_t N, std::size_t D) {
  require_dimension(D, "lemma2_bound");
  return static_cast<double>(n) /
         (std::sqrt(static_cast<double>(N)) * std::sqrt(static_cast<double>(D) - 2.0));
}

double aggregate_projection_error(MatrixRef design, VectorRef theta, VectorRef noise,
                                  const std::vector<SubsetIndex>& subsets) {
  if (design.cols() != theta.size() || design.rows() != noise.size()) {
    throw std::invalid_argument("aggregate_projection_error: dimension mismatch");
  }
  if (subsets.empty()) throw std::invalid_argument("aggregate_projection_error: no subsets");
  Vector projections = Vector::Zero(design.cols());
  Vector estimates = Vector::Zero(design.cols());
  for (const auto& subset : subsets) {
    const Matrix block = select_rows(design, subset.indices);
    const MinNormSolver solver(block);
    const Vector clean = block * theta;
    projections += solver.solve(clean);
    estimates += solver.solve(clean + select_entries(noise, subset.indices));
  }
  const double m = static_cast<double>(subsets.size());
  return (projections / m - estimates / m).norm();
}

Lemma1Decomposition lemma1_decompose(MatrixRef block, VectorRef theta, VectorRef noise) {
  if (block.cols() != theta.size() || block.rows() != noise.size()) {
    throw std::invalid_argument("lemma1_decompose: dimension mismatch");
  }
  if (block.rows() >= block.cols()) {
    throw std::invalid_argument("lemma1_decompose: needs fewer rows than columns");
  }
  const SingularExtremes sv = singular_extremes(block);
  const double floor = static_cast<double>(std::max(block.rows(), block.cols())) *
                       std::numeric_limits<double>::epsilon() * sv.sigma_max;
  if (!(sv.sigma_min > floor)) {
    throw NumericalDegeneracy("lemma1_decompose: rows are linearly dependent");
  }

  const MinNormSolver solver(block);
  Lemma1Decomposition out;
  const Vector clean = block * theta;
  out.projection = solver.solve(clean);
  out.estimate = solver.solve(clean + noise);
  out.gaussian_term = Vector::Zero(block.cols());
  for (Eigen::Index a = 0; a < block.rows(); ++a) {
    out.gaussian_term += (noise(a) / block.row(a).squaredNorm()) * block.row(a).transpose();
  }
  out.residual_e = out.estimate - out.projection - out.gaussian_term;
  return out;
}

double lemma1_identity_error(MatrixRef block, VectorRef noise, const Lemma1Decomposition& parts) {
  const Matrix gram = block * block.transpose();
  const Vector lhs = block * parts.residual_e;
  const Vector clean = block * parts.projection;
  double worst = 0.0;
  for (Eigen::Index a = 0; a < block.rows(); ++a) {
    double rhs = 0.0;
    double magnitude = 0.0;
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      if (i == a) continue;
      const double term = gram(a, i) * noise(i) / gram(i, i);
      rhs -= term;
      magnitude += std::abs(term);
    }
    // <g_a, e> is formed by cancellation among <g_a, thetahat>, <g_a, pi theta>
    // and omega_a, so those set the attainable precision.
    magnitude = std::max(magnitude, std::abs(clean(a)) + std::abs(noise(a)));
    if (magnitude == 0.0) magnitude = 1.0;
    worst = std::max(worst, std::abs(lhs(a) - rhs) / magnitude);
  }
  return worst;
}

double lemma1_row_energy(MatrixRef block, const Lemma1Decomposition& parts) {
  return (block * parts.residual_e).squaredNorm();
}

Lemma1Check lemma1_moment_check(std::size_t n, std::size_t D, std::size_t trials,
                                const Seed& seed) {
  require_dimension(D, "lemma1_moment_check");
  if (n < 1 || n >= D) throw std::invalid_argument("lemma1_moment_check: need 1 <= n < D");
  if (trials < 1) throw std::invalid_argument("lemma1_moment_check: need at least one trial");
  Lemma1Check out;
  out.exact = static_cast<double>(n) * static_cast<double>(n - 1) / (static_cast<double>(D) - 2.0);
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed trial = seed.child(t);
    const Matrix block = sample_gaussian_design(n, D, trial.child(Role::design)).entries;
    Stream theta_stream(trial.child(Role::theta));
    Stream noise_stream(trial.child(Role::noise));
    const Vector theta = gaussian_vector(theta_stream, D);
    const Vector noise = gaussian_vector(noise_stream, n);
    const Lemma1Decomposition parts = lemma1_decompose(block, theta, noise);
    sum += lemma1_row_energy(block, parts);
    out.max_identity_error = std::max(out.max_identity_error, lemma1_identity_error(block, noise, parts));
  }
  out.mean_row_energy = sum / static_cast<double>(trials);
  return out;
}

Lemma2Check lemma2_moment_check(std::size_t N, std::size_t D, std::size_t trials,
                                const Seed& seed) {
  require_dimension(D, "lemma2_moment_check");
  if (N < 1 || trials < 1) throw std::invalid_argument("lemma2_moment_check: need N, trials >= 1");
  Lemma2Check out;
  out.exact = static_cast<double>(N) / (static_cast<double>(D) - 2.0);
  out.norm_bound = std::sqrt(out.exact);
  double norm_sum = 0.0;
  Vector row(static_cast<Eigen::Index>(D));
  Vector total(static_cast<Eigen::Index>(D));
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Stream stream(seed.child(t));
    total.setZero();
    for (std::size_t a = 0; a < N; ++a) {
      for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = stream.normal();
      const double omega = stream.normal();
      total += (omega / row.squaredNorm()) * row;
    }
    const double sq = total.squaredNorm();
    sum += sq;
    norm_sum += std::sqrt(sq);
  }
  out.empirical_sq_mean = sum / static_cast<double>(trials);
  out.empirical_norm_mean = norm_sum / static_cast<double>(trials);
  return out;
}

MomentCheck inverse_chi_mean_check(std::size_t D, std::size_t trials, const Seed& seed) {
  require_dimension(D, "inverse_chi_mean_check");
  if (trials < 1) throw std::invalid_argument("inverse_chi_mean_check: need at least one trial");
  MomentCheck out;
  out.exact = 1.0 / (static_cast<double>(D) - 2.0);
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Stream stream(seed.child(t));
    double sq = 0.0;
    for (std::size_t j = 0; j < D; ++j) {
      const double g = stream.normal();
      sq += g * g;
    }
    sum += 1.0 / sq;
  }
  out.empirical = sum / static_cast<double>(trials);
  return out;
}

}  // namespace rawls::theory
