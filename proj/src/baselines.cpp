#include "rawls/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rawls::baselines {

namespace {

void check_pursuit_args(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                        const char* who) {
  const auto limit = static_cast<std::size_t>(std::min(design.rows(), design.cols()));
  if (sparsity < 1 || sparsity > limit) {
    throw std::invalid_argument(std::string(who) + ": sparsity " + std::to_string(sparsity) +
                                " must lie in [1, min(N, D)=" + std::to_string(limit) + "]");
  }
  if (design.rows() != measurements.size()) {
    throw std::invalid_argument(std::string(who) + ": design/measurement size mismatch");
  }
}

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// One greedy pursuit. `choose` maps normalized correlation scores (negative
// for already-selected columns) to the next column.
template <typename Chooser>
PursuitTrace pursue(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                    Chooser&& choose) {
  const Vector norms = design.colwise().norm().transpose();
  PursuitTrace trace;
  Vector residual = measurements;
  trace.residual_norms.push_back(residual.norm());
  std::vector<bool> taken(static_cast<std::size_t>(design.cols()), false);

  for (std::size_t step = 0; step < sparsity; ++step) {
    Vector scores = (design.transpose() * residual).cwiseAbs();
    for (Eigen::Index j = 0; j < scores.size(); ++j) {
      if (taken[static_cast<std::size_t>(j)]) {
        scores(j) = -1.0;
      } else {
        scores(j) = norms(j) > 0.0 ? scores(j) / norms(j) : 0.0;
      }
    }
    const std::size_t pick = choose(scores);
    taken[pick] = true;
    trace.selected.push_back(pick);

    const Matrix active = design(Eigen::all, trace.selected);
    Eigen::ColPivHouseholderQR<Matrix> qr(active);
    if (qr.rank() < active.cols()) {
      throw NumericalDegeneracy("pursuit: selected columns are rank deficient at step " +
                                std::to_string(step + 1));
    }
    trace.coefficients = qr.solve(measurements);
    residual = measurements - active * trace.coefficients;
    trace.residual_norms.push_back(residual.norm());
  }
  return trace;
}

std::size_t argmax_lowest(const Vector& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < scores.size(); ++j) {
    if (scores(j) > scores(best)) best = j;
  }
  return static_cast<std::size_t>(best);
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

LassoConfig LassoConfig::defaults(double sigma, std::size_t cols) {
  LassoConfig cfg;
  cfg.lambda = sigma * std::sqrt(2.0 * std::log(static_cast<double>(std::max<std::size_t>(cols, 1))));
  return cfg;
}

void LassoConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lasso: lambda must be nonnegative");
  if (max_iters < 1) throw std::invalid_argument("lasso: max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("lasso: rel_tol must be positive");
}

void Irl1Config::validate() const {
  if (outer_iters < 1) throw std::invalid_argument("irl1: outer_iters must be at least 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("irl1: epsilon must be positive");
  inner.validate();
}

RandOmpConfig RandOmpConfig::defaults(double sigma, Seed seed) {
  RandOmpConfig cfg;
  cfg.runs = 100;
  cfg.temperature = sigma > 0.0 ? std::min(1.0 / (2.0 * sigma * sigma), 50.0) : 50.0;
  cfg.seed = std::move(seed);
  return cfg;
}

void RandOmpConfig::validate() const {
  if (runs < 1) throw std::invalid_argument("rand_omp: runs must be at least 1");
  if (!(temperature > 0.0)) throw std::invalid_argument("rand_omp: temperature must be positive");
}

PursuitTrace omp_traced(MatrixRef design, VectorRef measurements, std::size_t sparsity) {
  check_pursuit_args(design, measurements, sparsity, "omp");
  return pursue(design, measurements, sparsity, argmax_lowest);
}

SupportEstimate omp(MatrixRef design, VectorRef measurements, std::size_t sparsity) {
  const PursuitTrace trace = omp_traced(design, measurements, sparsity);
  SupportEstimate out;
  for (std::size_t i = 0; i < trace.selected.size(); ++i) {
    out.entries.push_back({trace.selected[i], sign_of(trace.coefficients(static_cast<Eigen::Index>(i)))});
  }
  return out;
}

SupportEstimate rand_omp(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                         const RandOmpConfig& config) {
  check_pursuit_args(design, measurements, sparsity, "rand_omp");
  config.validate();
  Vector average = Vector::Zero(design.cols());
  for (std::size_t run = 0; run < config.runs; ++run) {
    Stream stream(config.seed.child(run));
    auto sample = [&](const Vector& scores) -> std::size_t {
      if (std::isinf(config.temperature)) return argmax_lowest(scores);
      const double top = scores.maxCoeff();
      Vector weights(scores.size());
      for (Eigen::Index j = 0; j < scores.size(); ++j) {
        weights(j) = scores(j) < 0.0
                         ? 0.0
                         : std::exp(config.temperature * (scores(j) * scores(j) - top * top));
      }
      double target = stream.uniform() * weights.sum();
      std::size_t last = 0;
      for (Eigen::Index j = 0; j < weights.size(); ++j) {
        if (weights(j) <= 0.0) continue;
        last = static_cast<std::size_t>(j);
        target -= weights(j);
        if (target < 0.0) return last;
      }
      return last;
    };
    const PursuitTrace trace = pursue(design, measurements, sparsity, sample);
    for (std::size_t i = 0; i < trace.selected.size(); ++i) {
      average(static_cast<Eigen::Index>(trace.selected[i])) +=
          trace.coefficients(static_cast<Eigen::Index>(i));
    }
  }
  average /= static_cast<double>(config.runs);
  const Vector correlations = (design.transpose() * measurements).cwiseAbs();
  return top_k_support(average, correlations, sparsity);
}

double lasso_objective(MatrixRef design, VectorRef measurements, VectorRef theta, double lambda) {
  return 0.5 * (measurements - design * theta).squaredNorm() + lambda * theta.lpNorm<1>();
}

LassoResult lasso_solve(MatrixRef design, VectorRef measurements, const LassoConfig& config,
                        bool record_objective) {
  config.validate();
  if (design.rows() != measurements.size()) {
    throw std::invalid_argument("lasso: design/measurement size mismatch");
  }
  LassoResult out;
  out.theta = Vector::Zero(design.cols());
  const double smax = singular_extremes(design).sigma_max;
  const double lipschitz = smax * smax;
  if (!(lipschitz > 0.0)) {
    out.converged = true;
    return out;
  }
  const Matrix gram = design.transpose() * design;
  const Vector xty = design.transpose() * measurements;
  const double step = 1.0 / lipschitz;
  const double threshold = config.lambda * step;
  if (record_objective) {
    out.objective.push_back(lasso_objective(design, measurements, out.theta, config.lambda));
  }

  Vector next(out.theta.size());
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    const Vector forward = out.theta - step * (gram * out.theta - xty);
    for (Eigen::Index i = 0; i < next.size(); ++i) next(i) = soft_threshold(forward(i), threshold);
    const double change = (next - out.theta).norm();
    out.theta.swap(next);
    out.iterations = it + 1;
    if (record_objective) {
      out.objective.push_back(lasso_objective(design, measurements, out.theta, config.lambda));
    }
    if (change <= config.rel_tol * out.theta.norm()) {
      out.converged = true;
      break;
    }
  }
  return out;
}

SupportEstimate top_k_support(VectorRef theta, VectorRef correlations, std::size_t sparsity) {
  if (sparsity > static_cast<std::size_t>(theta.size())) {
    throw std::invalid_argument("top-k: sparsity " + std::to_string(sparsity) +
                                " exceeds dimension " + std::to_string(theta.size()));
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(theta.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ta = std::abs(theta(static_cast<Eigen::Index>(a)));
    const double tb = std::abs(theta(static_cast<Eigen::Index>(b)));
    if (ta != tb) return ta > tb;
    return std::abs(correlations(static_cast<Eigen::Index>(a))) >
           std::abs(correlations(static_cast<Eigen::Index>(b)));
  });
  SupportEstimate out;
  for (std::size_t i = 0; i < sparsity; ++i) {
    out.entries.push_back({order[i], sign_of(theta(static_cast<Eigen::Index>(order[i])))});
  }
  return out;
}

SupportEstimate lasso_topk(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                           const LassoConfig& config) {
  const LassoResult fit = lasso_solve(design, measurements, config);
  const Vector correlations = (design.transpose() * measurements).cwiseAbs();
  return top_k_support(fit.theta, correlations, sparsity);
}

Vector irl1_solve(MatrixRef design, VectorRef measurements, const Irl1Config& config) {
  config.validate();
  Vector weights = Vector::Ones(design.cols());
  Vector theta;
  for (std::size_t outer = 0; outer < config.outer_iters; ++outer) {
    const Vector scale = weights.cwiseInverse();
    const Matrix rescaled = design * scale.asDiagonal();
    const Vector u = lasso_solve(rescaled, measurements, config.inner).theta;
    theta = u.cwiseQuotient(weights);
    weights = (theta.cwiseAbs().array() + config.epsilon).inverse().matrix();
  }
  return theta;
}

SupportEstimate irl1(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                     const Irl1Config& config) {
  const Vector theta = irl1_solve(design, measurements, config);
  const Vector correlations = (design.transpose() * measurements).cwiseAbs();
  return top_k_support(theta, correlations, sparsity);
}

}  // namespace rawls::baselines
