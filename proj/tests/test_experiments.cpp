#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "properties.hpp"
#include "rawls/experiments.hpp"
#include "rawls/theory.hpp"

using namespace rawls;
using namespace rawls::experiments;

namespace {

constexpr double kZ95 = 1.959963984540054;

TernarySignal signal_on(std::vector<std::size_t> support) {
  TernarySignal s;
  s.dim = 10;
  s.support = std::move(support);
  s.signs.assign(s.support.size(), 1);
  return s;
}

SupportEstimate estimate_of(std::vector<std::size_t> indices, int sign) {
  SupportEstimate e;
  for (auto i : indices) e.entries.push_back({i, sign});
  return e;
}

std::size_t cores() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

TEST_CASE("wilson interval agrees with the closed form") {
  const auto ci = wilson_interval(50, 100);
  const auto ref = oracle::wilson(50, 100, kZ95);
  CHECK(ci.low == doctest::Approx(ref.low).epsilon(1e-12));
  CHECK(ci.high == doctest::Approx(ref.high).epsilon(1e-12));
  CHECK(ci.low == doctest::Approx(0.40383).epsilon(1e-4));
  CHECK(ci.high == doctest::Approx(0.59617).epsilon(1e-4));
  for (std::size_t s : {0u, 1u, 7u, 93u, 100u}) {
    const auto a = wilson_interval(s, 100);
    const auto b = oracle::wilson(static_cast<double>(s), 100, kZ95);
    CHECK(a.low == doctest::Approx(b.low).epsilon(1e-12));
    CHECK(a.high == doctest::Approx(b.high).epsilon(1e-12));
    CHECK(a.low <= s / 100.0);
    CHECK(a.high >= s / 100.0);
  }
  CHECK(wilson_interval(0, 100).low == 0.0);
  CHECK(wilson_interval(100, 100).high == doctest::Approx(1.0));
}

TEST_CASE("is_success compares index sets only") {
  CHECK(is_success(signal_on({1, 5, 7}), estimate_of({7, 1, 5}, -1)));
  CHECK_FALSE(is_success(signal_on({1, 5, 7}), estimate_of({1, 5, 8}, 1)));
  CHECK_FALSE(is_success(signal_on({1, 5, 7}), estimate_of({1, 5}, 1)));
  CHECK(props::success_is_set_equality(301, 500) == "");
}

TEST_CASE("sweep and theta names parse") {
  CHECK(parse_sweep_kind("over_N") == SweepKind::over_N);
  CHECK(parse_sweep_kind("k") == SweepKind::over_k);
  CHECK(sweep_name(SweepKind::over_n) == "n");
  CHECK_THROWS_AS(parse_sweep_kind("over_m"), std::invalid_argument);
  CHECK(parse_theta_mode(to_string(ThetaMode::unit_gaussian)) == ThetaMode::unit_gaussian);
  CHECK_THROWS_AS(parse_theta_mode("cauchy"), std::invalid_argument);
}

TEST_CASE("spec validation") {
  ExperimentSpec spec;
  spec.values = {20, 30};
  spec.methods = {"rawls"};
  CHECK_NOTHROW(spec.validate());
  auto bad = spec;
  bad.values = {30, 20};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.methods = {"cosamp"};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.trials_per_point = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.k = 65;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(is_registered("irl1"));
  CHECK_FALSE(is_registered("scad"));
}

TEST_CASE("noiseless square system gives certain recovery") {
  ExperimentSpec spec;
  spec.D = 16;
  spec.values = {16};
  spec.k = 3;
  spec.sigma = 0.0;
  spec.trials_per_point = 10;
  spec.methods = {"rawls"};
  spec.options.rawls_n = 16;
  const auto curve = run_success_curve(spec, 2);
  REQUIRE(curve.points.size() == 1u);
  CHECK(curve.points[0].rate == 1.0);
}

TEST_CASE("methods share instances and curves ignore the worker count") {
  ExperimentSpec spec;
  spec.D = 32;
  spec.values = {15, 25};
  spec.k = 4;
  spec.trials_per_point = 12;
  spec.methods = registered_methods();
  spec.master_seed = 77;
  spec.options.randomp_runs = 10;
  std::vector<TrialOutcome> serial_out, parallel_out;
  const auto serial = run_success_curve(spec, 1, &serial_out);
  const auto parallel = run_success_curve(spec, 8, &parallel_out);
  CHECK(serial == parallel);
  REQUIRE(serial_out.size() == parallel_out.size());

  std::map<std::pair<std::size_t, std::size_t>, std::set<std::uint64_t>> prints;
  for (std::size_t i = 0; i < serial_out.size(); ++i) {
    const auto& o = serial_out[i];
    CHECK(o.instance_fingerprint == parallel_out[i].instance_fingerprint);
    CHECK(o.success == parallel_out[i].success);
    CHECK_FALSE(o.failed);
    prints[{o.point_index, o.trial}].insert(o.instance_fingerprint);
  }
  std::set<std::uint64_t> distinct;
  for (const auto& [key, set] : prints) {
    CHECK(set.size() == 1u);
    distinct.insert(*set.begin());
  }
  CHECK(distinct.size() == prints.size());

  for (const auto& p : serial.points) {
    CHECK(p.successes <= p.trials);
    CHECK(p.rate == doctest::Approx(static_cast<double>(p.successes) / p.trials));
    CHECK(p.ci_low <= p.rate);
    CHECK(p.rate <= p.ci_high);
  }
}

TEST_CASE("fingerprint changes with the instance") {
  const auto a = make_problem(10, 20, 3, 0.5, DesignKind::gaussian, instance_seed(1, 20, 10, 3, 0));
  const auto b = make_problem(10, 20, 3, 0.5, DesignKind::gaussian, instance_seed(1, 20, 10, 3, 0));
  const auto c = make_problem(10, 20, 3, 0.5, DesignKind::gaussian, instance_seed(1, 20, 10, 3, 1));
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a) != fingerprint(c));
  CHECK(a.measurements.noise_sigma == 0.5);
  CHECK(a.truth.sparsity() == 3u);
}

TEST_CASE("a failing method counts as a non-success") {
  // k = N makes OMP's refit square; k > N is rejected up front by omp.
  ExperimentSpec spec;
  spec.D = 10;
  spec.values = {3};
  spec.k = 4;
  spec.trials_per_point = 3;
  spec.methods = {"omp", "lasso"};
  std::vector<TrialOutcome> outs;
  const auto curve = run_success_curve(spec, 1, &outs);
  CHECK(curve.find(3, "omp")->successes == 0u);
  for (const auto& o : outs) {
    if (o.method == "omp") CHECK(o.failed);
  }
}

TEST_CASE("randomp stays within 15 points of omp at N = 40") {
  ExperimentSpec spec;
  spec.D = 64;
  spec.values = {40};
  spec.k = 10;
  spec.trials_per_point = 100;
  spec.methods = {"omp", "randomp"};
  spec.master_seed = 2024;
  const auto curve = run_success_curve(spec, cores());
  const double omp = curve.find(40, "omp")->rate;
  const double rand = curve.find(40, "randomp")->rate;
  CHECK(std::abs(omp - rand) <= 0.15);
}

TEST_CASE("rawls success is non-decreasing in N up to interval overlap") {
  ExperimentSpec spec;
  spec.D = 64;
  spec.values = {20, 30, 40, 50, 60, 70, 80, 90};
  spec.k = 10;
  spec.trials_per_point = 60;
  spec.methods = {"rawls"};
  spec.master_seed = 11;
  const auto curve = run_success_curve(spec, cores());
  std::vector<double> rates;
  for (const auto& p : curve.points) rates.push_back(p.rate);
  const auto fit = oracle::isotonic(rates);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const auto& p = curve.points[i];
    CHECK(fit[i] >= p.ci_low - 1e-12);
    CHECK(fit[i] <= p.ci_high + 1e-12);
  }
  CHECK(rates.back() > rates.front());
}

TEST_CASE("bound sweep rows") {
  const auto rows = run_bound_sweep(500, 40, {1, 10, 30}, 5, ThetaMode::gaussian, 4, Seed(3), 2);
  REQUIRE(rows.size() == 3u);
  // At n = 1 the error is dominated by the noise term, of size sqrt(1 / (m (D - 2))).
  CHECK(std::isfinite(rows[0].empirical_error_mean));
  const double scale = std::sqrt(1.0 / (5.0 * 498.0));
  CHECK(rows[0].empirical_error_mean > 0.5 * scale);
  CHECK(rows[0].empirical_error_mean < 2.0 * scale);
  for (const auto& r : rows) {
    CHECK(r.theorem1_bound == theory::theorem1_bound(r.n, 40, 500).theorem1_value);
    CHECK(r.errors.size() == 4u);
    CHECK(r.m == 5u);
  }
  const auto again = run_bound_sweep(500, 40, {1, 10, 30}, 5, ThetaMode::gaussian, 4, Seed(3), 7);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].errors == again[i].errors);

  CHECK_THROWS_AS(run_bound_sweep(500, 40, {40}, 5, ThetaMode::gaussian, 1, Seed(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_bound_sweep(2, 40, {1}, 5, ThetaMode::gaussian, 1, Seed(1)),
                  std::invalid_argument);
}

TEST_CASE("unit theta mode normalizes the signal") {
  // With n = 1 the projection error does not depend on theta, so both modes agree.
  const auto g = run_bound_sweep(50, 20, {1}, 3, ThetaMode::gaussian, 3, Seed(5));
  const auto u = run_bound_sweep(50, 20, {1}, 3, ThetaMode::unit_gaussian, 3, Seed(5));
  CHECK(g[0].empirical_error_mean == doctest::Approx(u[0].empirical_error_mean).epsilon(1e-9));
}
