#include "rawls/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rawls {

RawlsConfig RawlsConfig::defaults(std::size_t rows, std::size_t cols, Seed seed) {
  const double target = 0.6 * static_cast<double>(std::min(rows, cols));
  RawlsConfig cfg;
  cfg.subset_size = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(target)));
  cfg.subset_count = 100;
  cfg.seed = std::move(seed);
  return cfg;
}

bool RawlsConfig::beyond_bound_regime(std::size_t cols) const {
  return static_cast<double>(subset_size) >= 0.9 * static_cast<double>(cols);
}

std::vector<std::size_t> SupportEstimate::sorted_indices() const {
  std::vector<std::size_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.index);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubsetIndex> sample_subsets(std::size_t rows, std::size_t subset_size,
                                        std::size_t subset_count, const Seed& seed) {
  if (subset_size < 1 || subset_size > rows) {
    throw std::invalid_argument("sample_subsets: subset size " + std::to_string(subset_size) +
                                " must lie in [1, " + std::to_string(rows) + "]");
  }
  if (subset_count < 1) throw std::invalid_argument("sample_subsets: need at least one subset");
  std::vector<std::size_t> all(rows);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<SubsetIndex> out(subset_count);
  for (std::size_t i = 0; i < subset_count; ++i) {
    Stream stream(seed.child(i));
    auto& idx = out[i].indices;
    idx.reserve(subset_size);
    std::sample(all.begin(), all.end(), std::back_inserter(idx), subset_size, stream);
    std::sort(idx.begin(), idx.end());
  }
  return out;
}

Vector aggregate_over_subsets(MatrixRef design, VectorRef measurements,
                              const std::vector<SubsetIndex>& subsets) {
  if (design.rows() != measurements.size()) {
    throw std::invalid_argument("rawls_aggregate: design has " + std::to_string(design.rows()) +
                                " rows but there are " + std::to_string(measurements.size()) +
                                " measurements");
  }
  if (subsets.empty()) throw std::invalid_argument("rawls_aggregate: no subsets");
  Vector sum = Vector::Zero(design.cols());
  for (const auto& subset : subsets) {
    sum += min_norm_solve(select_rows(design, subset.indices),
                          select_entries(measurements, subset.indices));
  }
  return sum / static_cast<double>(subsets.size());
}

AggregateEstimate rawls_aggregate(MatrixRef design, VectorRef measurements,
                                  const RawlsConfig& config) {
  const auto rows = static_cast<std::size_t>(design.rows());
  const auto cols = static_cast<std::size_t>(design.cols());
  if (config.subset_size < 1 || config.subset_size > std::min(rows, cols)) {
    throw std::invalid_argument("rawls_aggregate: subset size " +
                                std::to_string(config.subset_size) + " must lie in [1, min(N, D)=" +
                                std::to_string(std::min(rows, cols)) + "]");
  }
  if (design.rows() != measurements.size()) {
    throw std::invalid_argument("rawls_aggregate: design/measurement size mismatch");
  }
  const auto subsets =
      sample_subsets(rows, config.subset_size, config.subset_count, config.seed.child(Role::subsets));
  AggregateEstimate out;
  out.raw = aggregate_over_subsets(design, measurements, subsets);
  const double scale = static_cast<double>(cols) / static_cast<double>(config.subset_size);
  out.rescaled = scale * out.raw;
  out.config = config;
  return out;
}

std::size_t largest_entry(VectorRef values) {
  if (values.size() == 0) throw std::invalid_argument("largest_entry: empty vector");
  Eigen::Index best = 0;
  double best_abs = std::abs(values(0));
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    const double a = std::abs(values(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return static_cast<std::size_t>(best);
}

PeelTrace rawls_peel_traced(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                            const RawlsConfig& config) {
  const auto cols = static_cast<std::size_t>(design.cols());
  if (sparsity < 1 || sparsity > cols) {
    throw std::invalid_argument("rawls_peel: sparsity " + std::to_string(sparsity) +
                                " must lie in [1, D=" + std::to_string(cols) + "]");
  }
  if (design.rows() != measurements.size()) {
    throw std::invalid_argument("rawls_peel: design/measurement size mismatch");
  }

  Matrix current = design;
  Vector residual = measurements;
  std::vector<std::size_t> original(cols);
  std::iota(original.begin(), original.end(), std::size_t{0});

  PeelTrace trace;
  for (std::size_t step = 0; step < sparsity; ++step) {
    const auto rows_now = static_cast<std::size_t>(current.rows());
    const auto cols_now = static_cast<std::size_t>(current.cols());
    RawlsConfig round = config;
    round.subset_size = std::min(config.subset_size, std::min(rows_now, cols_now));
    round.seed = config.seed.child(step);

    AggregateEstimate agg = rawls_aggregate(current, residual, round);
    const std::size_t pick = largest_entry(agg.raw);
    const int sign = agg.raw(static_cast<Eigen::Index>(pick)) < 0.0 ? -1 : 1;
    trace.support.entries.push_back({original[pick], sign});
    trace.aggregates.push_back(std::move(agg.raw));

    const auto col = static_cast<Eigen::Index>(pick);
    residual -= sign * current.col(col);
    const Eigen::Index tail = current.cols() - col - 1;
    if (tail > 0) current.middleCols(col, tail) = current.rightCols(tail).eval();
    current.conservativeResize(Eigen::NoChange, current.cols() - 1);
    original.erase(original.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return trace;
}

SupportEstimate rawls_peel(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                           const RawlsConfig& config) {
  return rawls_peel_traced(design, measurements, sparsity, config).support;
}

}  // namespace rawls
