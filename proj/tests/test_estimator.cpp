#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "rawls/estimator.hpp"

using namespace rawls;

namespace {

RawlsConfig config(std::size_t n, std::size_t m, std::uint64_t seed) {
  RawlsConfig cfg;
  cfg.subset_size = n;
  cfg.subset_count = m;
  cfg.seed = Seed(seed);
  return cfg;
}

/// Signal supported on the first k coordinates with random signs.
TernarySignal leading_signal(std::size_t D, std::size_t k, gen::Gen& g) {
  TernarySignal s;
  s.dim = D;
  for (std::size_t i = 0; i < k; ++i) {
    s.support.push_back(i);
    s.signs.push_back(g.coin() ? 1 : -1);
  }
  return s;
}

}  // namespace

TEST_CASE("defaults follow the 0.6 min(N, D) rule") {
  CHECK(RawlsConfig::defaults(80, 64, Seed(1)).subset_size == 38u);
  CHECK(RawlsConfig::defaults(30, 64, Seed(1)).subset_size == 18u);
  CHECK(RawlsConfig::defaults(1, 1, Seed(1)).subset_size == 1u);
  CHECK(RawlsConfig::defaults(80, 64, Seed(1)).subset_count == 100u);
  CHECK(config(58, 1, 0).beyond_bound_regime(64) == true);
  CHECK(config(57, 1, 0).beyond_bound_regime(64) == false);
}

TEST_CASE("sample_subsets examples") {
  const auto full = sample_subsets(5, 5, 3, Seed(1));
  REQUIRE(full.size() == 3u);
  for (const auto& s : full) CHECK(s.indices == std::vector<std::size_t>{0, 1, 2, 3, 4});

  const auto coins = sample_subsets(2, 1, 10000, Seed(2));
  const auto zeros = std::count_if(coins.begin(), coins.end(),
                                   [](const SubsetIndex& s) { return s.indices[0] == 0; });
  CHECK(std::abs(zeros - 5000) <= 200);

  const auto a = sample_subsets(40, 13, 50, Seed(3));
  const auto b = sample_subsets(40, 13, 50, Seed(3));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].indices == b[i].indices);
    CHECK(a[i].indices.size() == 13u);
    CHECK(std::adjacent_find(a[i].indices.begin(), a[i].indices.end(),
                             [](auto x, auto y) { return x >= y; }) == a[i].indices.end());
    CHECK(a[i].indices.back() < 40u);
  }
  CHECK_THROWS_AS(sample_subsets(3, 4, 1, Seed(1)), std::invalid_argument);
  CHECK_THROWS_AS(sample_subsets(3, 0, 1, Seed(1)), std::invalid_argument);
  CHECK_THROWS_AS(sample_subsets(3, 2, 0, Seed(1)), std::invalid_argument);
}

TEST_CASE("each row is included with probability n/N") {
  const auto subsets = sample_subsets(10, 4, 5000, Seed(9));
  std::vector<int> hits(10, 0);
  for (const auto& s : subsets)
    for (auto i : s.indices) hits[i]++;
  const double expected = 5000 * 0.4;
  const double sd = std::sqrt(5000 * 0.4 * 0.6);
  for (int h : hits) CHECK(std::abs(h - expected) < 5 * sd);
}

TEST_CASE("square noiseless system is solved exactly") {
  gen::Gen g(1);
  const Matrix x = g.gaussian_matrix(12, 12);
  const Vector theta = g.gaussian_vector(12);
  const auto agg = rawls_aggregate(x, x * theta, config(12, 1, 4));
  CHECK((agg.raw - theta).norm() <= 1e-8 * theta.norm());
}

TEST_CASE("rescaled aggregate is D/n times raw") {
  gen::Gen g(2);
  const Matrix x = g.gaussian_matrix(30, 64);
  const auto agg = rawls_aggregate(x, g.gaussian_vector(30), config(18, 10, 5));
  const double scale = 64.0 / 18.0;
  for (Eigen::Index i = 0; i < agg.raw.size(); ++i) CHECK(agg.rescaled(i) == scale * agg.raw(i));
  CHECK(agg.config.subset_size == 18u);
}

TEST_CASE("aggregate equals the mean of independent per-subset oracle solves") {
  gen::Gen g(3);
  const Matrix x = g.gaussian_matrix(20, 35);
  const Vector y = g.gaussian_vector(20);
  const auto cfg = config(9, 15, 6);
  const auto subsets = sample_subsets(20, 9, 15, cfg.seed.child(Role::subsets));
  Vector expected = Vector::Zero(35);
  for (const auto& s : subsets) {
    Matrix block(9, 35);
    Vector rhs(9);
    for (int r = 0; r < 9; ++r) {
      block.row(r) = x.row(static_cast<Eigen::Index>(s.indices[r]));
      rhs(r) = y(static_cast<Eigen::Index>(s.indices[r]));
    }
    const Vector sol = oracle::pinv_solve(block, rhs);
    CHECK((block * sol - rhs).norm() <= 1e-8 * rhs.norm());
    expected += sol;
  }
  expected /= 15.0;
  CHECK((rawls_aggregate(x, y, cfg).raw - expected).norm() <= 1e-8 * expected.norm());
}

TEST_CASE("aggregate is linear and scale-equivariant in y") {
  gen::Gen g(4);
  for (int c = 0; c < 20; ++c) {
    const std::size_t N = g.size(5, 40);
    const std::size_t D = g.size(5, 60);
    const std::size_t n = g.size(1, std::min(N, D));
    const Matrix x = g.gaussian_matrix(N, D);
    const Vector y1 = g.gaussian_vector(N);
    const Vector y2 = g.gaussian_vector(N);
    const auto cfg = config(n, 7, 100 + c);
    const Vector a1 = rawls_aggregate(x, y1, cfg).raw;
    const Vector a2 = rawls_aggregate(x, y2, cfg).raw;
    const Vector a12 = rawls_aggregate(x, y1 + y2, cfg).raw;
    CHECK((a12 - a1 - a2).norm() <= 1e-8 * (a1.norm() + a2.norm()));
    const double scale = g.real(0.1, 10.0);
    const Vector as = rawls_aggregate(x, scale * y1, cfg).raw;
    CHECK((as - scale * a1).norm() <= 1e-8 * scale * a1.norm());
    CHECK(largest_entry(as) == largest_entry(a1));
  }
}

TEST_CASE("aggregate is concentrated on the support with the right signs") {
  // D = 64, N = 80, n = 58, m = 100, support on the first 16 coordinates.
  gen::Gen g(5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto theta = leading_signal(64, 16, g);
    const auto x = sample_gaussian_design(80, 64, Seed(seed).child(Role::design));
    const auto y = measure(x, theta, 0.5, Seed(seed).child(Role::noise));
    const Vector raw = rawls_aggregate(x.entries, y.values, config(58, 100, seed)).raw;
    const double on = raw.head(16).cwiseAbs().mean();
    const double off = raw.tail(48).cwiseAbs().mean();
    CHECK(on > off);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK((raw(static_cast<Eigen::Index>(i)) > 0) == (theta.signs[i] > 0));
    }
  }
}

TEST_CASE("largest_entry breaks ties toward the lowest index") {
  CHECK(largest_entry(Vector((Vector(4) << 1, -3, 3, 2).finished())) == 1u);
  CHECK(largest_entry(Vector::Zero(5)) == 0u);
  CHECK_THROWS_AS(largest_entry(Vector(0)), std::invalid_argument);
}

TEST_CASE("peeling examples") {
  const auto two = rawls_peel(Matrix::Identity(2, 2), Vector((Vector(2) << 1, 0).finished()), 1,
                              config(2, 1, 0));
  CHECK(two.entries == std::vector<SupportEntry>{{0, 1}});

  const auto three = rawls_peel(Matrix::Identity(3, 3), Vector((Vector(3) << 0, -1, 0).finished()),
                                1, config(3, 1, 0));
  CHECK(three.entries == std::vector<SupportEntry>{{1, -1}});

  // All-zero aggregate: lowest index, positive sign.
  const auto zero = rawls_peel(Matrix::Identity(3, 3), Vector::Zero(3), 1, config(3, 1, 0));
  CHECK(zero.entries == std::vector<SupportEntry>{{0, 1}});

  CHECK_THROWS_AS(rawls_peel(Matrix::Identity(3, 3), Vector::Zero(3), 4, config(3, 1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(rawls_peel(Matrix::Identity(3, 3), Vector::Zero(2), 1, config(3, 1, 0)),
                  std::invalid_argument);
}

TEST_CASE("noiseless square systems are recovered exactly for every k") {
  for (std::size_t k = 1; k <= 8; ++k) {
    gen::Gen g(10 + k);
    const std::size_t D = 8;
    const auto theta = sample_ternary_signal(D, k, Seed(k));
    const Matrix x = g.gaussian_matrix(D, D);
    const Vector y = x * theta.dense();
    const auto est = rawls_peel(x, y, k, config(D, 3, k));
    CHECK(est.sorted_indices() == theta.support);
    for (const auto& e : est.entries) {
      const auto pos = std::find(theta.support.begin(), theta.support.end(), e.index);
      CHECK(e.sign == theta.signs[static_cast<std::size_t>(pos - theta.support.begin())]);
    }
  }
}

TEST_CASE("peeling reports original indices and is equivariant under column permutation") {
  gen::Gen g(6);
  for (int c = 0; c < 10; ++c) {
    const std::size_t N = 40, D = 32, k = 5;
    const Matrix x = g.gaussian_matrix(N, D);
    const auto theta = sample_ternary_signal(D, k, Seed(c));
    const Vector y = x * theta.dense() + 0.1 * g.gaussian_vector(N);
    std::vector<std::size_t> perm(D);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g.engine());
    Matrix xp(N, D);
    for (std::size_t j = 0; j < D; ++j) xp.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(perm[j]));

    const auto cfg = config(20, 30, 50 + c);
    const auto base = rawls_peel(x, y, k, cfg);
    const auto permuted = rawls_peel(xp, y, k, cfg);
    REQUIRE(base.entries.size() == k);
    REQUIRE(permuted.entries.size() == k);
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(perm[permuted.entries[i].index] == base.entries[i].index);
      CHECK(permuted.entries[i].sign == base.entries[i].sign);
    }
    const auto indices = base.sorted_indices();
    const std::set<std::size_t> distinct(indices.begin(), indices.end());
    CHECK(distinct.size() == k);
  }
}

TEST_CASE("peeling is deterministic and the trace matches the support") {
  gen::Gen g(7);
  const Matrix x = g.gaussian_matrix(30, 64);
  const Vector y = g.gaussian_vector(30);
  const auto cfg = config(18, 40, 9);
  const auto a = rawls_peel_traced(x, y, 6, cfg);
  const auto b = rawls_peel_traced(x, y, 6, cfg);
  CHECK(a.support == b.support);
  CHECK(a.support == rawls_peel(x, y, 6, cfg));
  REQUIRE(a.aggregates.size() == 6u);
  for (std::size_t t = 0; t < 6; ++t) CHECK(a.aggregates[t].size() == static_cast<Eigen::Index>(64 - t));
  CHECK(a.aggregates[0] == rawls_aggregate(x, y, RawlsConfig{18, 40, cfg.seed.child(0)}).raw);
}

TEST_CASE("subset size is clamped once columns drop below it") {
  gen::Gen g(8);
  const Matrix x = g.gaussian_matrix(10, 6);
  const Vector y = g.gaussian_vector(10);
  CHECK(rawls_peel(x, y, 6, config(6, 5, 1)).entries.size() == 6u);
}
