#pragma once

#include <cstddef>
#include <vector>

#include "rawls/linalg.hpp"
#include "rawls/random.hpp"

namespace rawls {

/// Subset size n, subset count m and the seed the subsets are drawn from.
struct RawlsConfig {
  std::size_t subset_size = 1;
  std::size_t subset_count = 100;
  Seed seed;

  /// n = round(0.6 * min(N, D)) (at least 1), m = 100.
  static RawlsConfig defaults(std::size_t rows, std::size_t cols, Seed seed);

  /// True when n >= 0.9 * D, where the averaging error bound no longer
  /// applies. Advisory only.
  bool beyond_bound_regime(std::size_t cols) const;
};

/// Sorted distinct row indices.
struct SubsetIndex {
  std::vector<std::size_t> indices;
};

struct AggregateEstimate {
  Vector raw;       ///< (1/m) sum of subset solutions
  Vector rescaled;  ///< (D/n) * raw
  RawlsConfig config;
};

struct SupportEntry {
  std::size_t index = 0;
  int sign = 1;

  bool operator==(const SupportEntry&) const = default;
};

/// k (index, sign) pairs in the order they were recovered.
struct SupportEstimate {
  std::vector<SupportEntry> entries;

  std::vector<std::size_t> sorted_indices() const;
  bool operator==(const SupportEstimate&) const = default;
};

/// m independent uniform n-subsets of {0..N-1}.
std::vector<SubsetIndex> sample_subsets(std::size_t rows, std::size_t subset_size,
                                        std::size_t subset_count, const Seed& seed);

/// Average of minimum-norm least-squares solutions over the sampled subsets.
/// The sum is accumulated in subset order.
AggregateEstimate rawls_aggregate(MatrixRef design, VectorRef measurements,
                                  const RawlsConfig& config);

/// Same, over explicitly supplied subsets.
Vector aggregate_over_subsets(MatrixRef design, VectorRef measurements,
                              const std::vector<SubsetIndex>& subsets);

/// Index of the largest |entry|; ties go to the lowest index.
std::size_t largest_entry(VectorRef values);

struct PeelTrace {
  SupportEstimate support;
  /// Raw aggregate computed at each peeling step, in the reduced coordinates
  /// of that step.
  std::vector<Vector> aggregates;
};

/// Greedy peeling: k rounds of aggregate, commit the largest coordinate with
/// its sign, subtract sign * column from y, delete the column. Round t draws
/// its subsets from config.seed.child(t). n is clamped to the current
/// min(N, D). Indices are reported in the original column numbering.
SupportEstimate rawls_peel(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                           const RawlsConfig& config);
PeelTrace rawls_peel_traced(MatrixRef design, VectorRef measurements, std::size_t sparsity,
                            const RawlsConfig& config);

}  // namespace rawls
