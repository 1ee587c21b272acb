#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rawls/parallel.hpp"
#include "rawls/random.hpp"

using rawls::Role;
using rawls::Seed;
using rawls::Stream;

namespace {

std::vector<std::uint64_t> draw(const Seed& seed, int count) {
  Stream s(seed);
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(s());
  return out;
}

}  // namespace

TEST_CASE("identical master and path give identical streams") {
  const Seed a = Seed(42).child(Role::design).child(3);
  const Seed b = Seed(42).child(Role::design).child(3);
  CHECK(a == b);
  CHECK(a.key() == b.key());
  CHECK(draw(a, 64) == draw(b, 64));
}

TEST_CASE("stream does not depend on evaluation order of other paths") {
  const Seed root(9);
  const auto first = draw(root.child(5), 16);
  (void)draw(root.child(1), 1000);
  (void)draw(root.child(7).child(2), 1000);
  CHECK(draw(root.child(5), 16) == first);
}

TEST_CASE("swapping master and child component gives a different key") {
  CHECK(Seed(7).child(8).key() != Seed(8).child(7).key());
  CHECK(Seed(0).child(1).key() != Seed(1).child(0).key());
  CHECK(draw(Seed(7).child(8), 8) != draw(Seed(8).child(7), 8));
}

TEST_CASE("path order matters") {
  CHECK(Seed(3).child(1).child(2).key() != Seed(3).child(2).child(1).key());
  CHECK(Seed(3).child(0).key() != Seed(3).key());
  CHECK(Seed(3).child(0).child(0).key() != Seed(3).child(0).key());
}

TEST_CASE("keys are distinct across a grid of small paths") {
  std::set<std::uint64_t> keys;
  std::size_t total = 0;
  for (std::uint64_t master = 0; master < 16; ++master) {
    for (std::uint64_t i = 0; i < 16; ++i) {
      for (std::uint64_t j = 0; j < 16; ++j) {
        keys.insert(Seed(master).child(i).child(j).key());
        ++total;
      }
      keys.insert(Seed(master).child(Role::method).child(i).key());
      ++total;
    }
  }
  CHECK(keys.size() == total);
}

TEST_CASE("uniform, below and sign stay in range") {
  Stream s(Seed(1));
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(s.below(7) < 7u);
    const int sg = s.sign();
    CHECK((sg == 1 || sg == -1));
  }
}

TEST_CASE("normal draws have unit moments") {
  Stream s(Seed(2024).child(Role::noise));
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  // 5 standard errors: sd(mean) = 1/sqrt(n), sd(var) ~ sqrt(2/n).
  CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("sign is fair") {
  Stream s(Seed(5));
  int plus = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) plus += s.sign() > 0;
  CHECK(std::abs(plus - n / 2) < 5 * std::sqrt(n / 4.0));
}

TEST_CASE("mix64 is injective on a sample") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t x = 0; x < 100000; ++x) seen.insert(rawls::mix64(x));
  CHECK(seen.size() == 100000u);
}

TEST_CASE("parallel_for visits every index once") {
  for (std::size_t workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    rawls::parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    bool once = true;
    for (auto& h : hits) once = once && h.load() == 1;
    CHECK(once);
  }
}

TEST_CASE("parallel_for rethrows a body failure") {
  CHECK_THROWS_AS(rawls::parallel_for(100, 4,
                                      [](std::size_t i) {
                                        if (i == 37) throw std::runtime_error("boom");
                                      }),
                  std::runtime_error);
  CHECK_NOTHROW(rawls::parallel_for(0, 4, [](std::size_t) {}));
}
