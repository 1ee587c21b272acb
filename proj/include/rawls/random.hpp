#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace rawls {

/// Tags for the role a derived stream plays. The values are large so they
/// never coincide with small counters (trial or subset indices) that share
/// a path position.
enum class Role : std::uint64_t {
  design = 0x5241574C53000001ULL,
  signal,
  noise,
  subsets,
  method,
  theta,
  instance,
};

/// A master seed together with a derivation path.
///
/// Streams are keyed by hashing (master, path) so the values drawn for a
/// given path never depend on which other paths were evaluated first, or on
/// which thread evaluated them.
class Seed {
 public:
  explicit Seed(std::uint64_t master = 0) : master_(master) {}

  Seed child(std::uint64_t component) const;
  Seed child(Role role) const { return child(static_cast<std::uint64_t>(role)); }

  std::uint64_t master() const { return master_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  /// 64-bit stream key derived from master and path.
  std::uint64_t key() const;

  bool operator==(const Seed&) const = default;

 private:
  std::uint64_t master_;
  std::vector<std::uint64_t> path_;
};

/// Counter-based generator: output i is a bijective mix of key + i*phi
/// (the SplitMix64 construction). Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(const Seed& seed) : state_(seed.key()) {}
  explicit Stream(std::uint64_t key) : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  double normal() { return normal_(*this); }
  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);
  /// Uniform double in [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(*this); }
  int sign() { return ((*this)() >> 63) != 0 ? 1 : -1; }

 private:
  std::uint64_t state_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// The SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace rawls
