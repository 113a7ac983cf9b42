#include <doctest.h>

#include <atomic>
#include <cmath>

#include "ctrwlim/diagnostics.hpp"
#include "ctrwlim/errors.hpp"
#include "ctrwlim/stable.hpp"
#include "oracles.hpp"

using namespace ctrwlim;

TEST_CASE("ks_statistic") {
  const std::vector<double> zero{0.0};
  CHECK(ks_statistic(zero, [](double x) { return oracle::normal_cdf(x, 1.0); }) == 0.5);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, [](double) { return 0.0; }), ParameterError);
  const auto x = sample_symmetric_stable({2.0, 1.0, Skew::symmetric}, {40, 0}, 10000);
  const auto cdf = [](double t) { return oracle::normal_cdf(t, 2.0); };
  CHECK(ks_statistic(x, cdf) == doctest::Approx(oracle::ks(x, cdf)).epsilon(1e-14));
  CHECK(ks_statistic(x, cdf) < 0.0193);
  CHECK(ks_critical_value(0.01, 10000) == doctest::Approx(1.6276 / 100).epsilon(1e-3));
}

TEST_CASE("KS self-test for every sampler") {
  const std::size_t n = 10000;
  const double crit = ks_critical_value(0.01, n);
  const auto x = sample_ml_waiting_time({1.0, 1.0}, {41, 0}, n);
  CHECK(ks_statistic(x, [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t); }) < crit);
  const auto y = sample_ml_waiting_time({0.5, 1.0}, {41, 1}, n);
  CHECK(ks_statistic(y, [](double t) { return t <= 0 ? 0.0 : 1.0 - oracle::ml_half(-std::sqrt(t)); }) < crit);
  const auto s = sample_subordinator_increment({0.5, 1.0, Skew::positive}, {41, 2}, n);
  CHECK(ks_statistic(s, [](double t) { return t <= 0 ? 0.0 : std::erfc(0.5 / std::sqrt(t)); }) < crit);
  const auto c = sample_symmetric_stable({1.0, 1.0, Skew::symmetric}, {41, 3}, n);
  CHECK(ks_statistic(c, [](double t) { return 0.5 + std::atan(t) / std::numbers::pi; }) < crit);
  const auto g = sample_symmetric_stable({2.0, 1.0, Skew::symmetric}, {41, 4}, n);
  CHECK(ks_statistic(g, [](double t) { return oracle::normal_cdf(t, 2.0); }) < crit);
}

TEST_CASE("two-sample KS and quantiles") {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{3, 4, 5, 6};
  CHECK(ks_two_sample(a, b) == 0.5);
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({4, 1}, 0.0) == 1.0);
  CHECK(quantile({4, 1}, 1.0) == 4.0);
  CHECK_THROWS_AS(quantile({}, 0.5), ParameterError);
}

TEST_CASE("mean_check") {
  auto counts = [](double beta, double t, std::uint64_t seed) {
    const CtrwLaws laws{StableLaw{2.0, 1.0, Skew::symmetric}, MittagLefflerLaw{beta, 1.0}};
    std::vector<double> v(100000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = counting_path(generate_skeleton(laws, {seed, i}, t), t)(t);
    }
    return v;
  };
  const MeanCheck p = mean_check(1.0, 1.0, counts(1.0, 1.0, 50));
  CHECK(p.expected == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.pass);
  const MeanCheck q = mean_check(0.7, 1.0, counts(0.7, 1.0, 51));
  CHECK(q.expected == doctest::Approx(1.0 / std::tgamma(1.7)).epsilon(1e-8));
  CHECK(std::abs(q.z) < 3.0);
  const MeanCheck r = mean_check(0.5, 0.01, counts(0.5, 0.01, 52));
  // tiny t: the mean is dominated by P(N >= 1) = 1 - E_{1/2}(-0.1)
  CHECK(r.expected == doctest::Approx(1.0 - oracle::ml_half(-0.1)).epsilon(0.05));
  CHECK(r.expected == doctest::Approx(0.1 / std::tgamma(1.5)).epsilon(1e-8));
  CHECK(std::abs(r.z) < 3.0);
}

TEST_CASE("parallel_for covers every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, 3, [](std::size_t i) {
                    if (i == 57) throw ParameterError("boom");
                  }),
                  ParameterError);
}

TEST_CASE("EnsembleSpec validation") {
  EnsembleSpec s;
  CHECK_NOTHROW(s.validate());
  s.probe_times = {0.5, 2.0};
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = EnsembleSpec{};
  s.ns = {};
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = EnsembleSpec{};
  s.alpha = 2.5;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = EnsembleSpec{};
  s.samples = 0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("Gaussian convergence report") {
  EnsembleSpec s;
  s.seed = 7;
  s.samples = 10000;
  s.modulus_paths = 20;
  const EnsembleReport r = convergence_report(s, ReportOptions{4, false});
  CHECK(r.limit_method == "gaussian");
  REQUIRE(r.per_n.size() == 3);
  const NRecord& last = r.per_n.back();
  CHECK(last.ks.back() < 0.02);
  for (const auto& rec : r.per_n) {
    for (const auto& m : rec.mean_checks) CHECK(m.pass);
    CHECK(!rec.wall_sec.has_value());
    for (std::size_t i = 1; i < rec.modulus.size(); ++i) CHECK(rec.modulus[i] <= rec.modulus[i - 1]);
  }
  CHECK(!r.runtime_sec.has_value());
}

TEST_CASE("report determinism across thread counts") {
  EnsembleSpec s;
  s.alpha = 1.6;
  s.beta = 0.7;
  s.ns = {64, 256};
  s.integrand = "cos:freq=2";
  s.samples = 600;
  s.limit_samples = 600;
  s.limit_step = 1.0 / 256;
  s.modulus_paths = 10;
  s.seed = 3;
  const EnsembleReport a = convergence_report(s, ReportOptions{1, false});
  const EnsembleReport b = convergence_report(s, ReportOptions{3, false});
  CHECK(a.limit_method == "simulation");
  REQUIRE(a.per_n.size() == b.per_n.size());
  for (std::size_t i = 0; i < a.per_n.size(); ++i) {
    CHECK(a.per_n[i].ks == b.per_n[i].ks);
    CHECK(a.per_n[i].mean == b.per_n[i].mean);
    CHECK(a.per_n[i].modulus == b.per_n[i].modulus);
    CHECK(a.per_n[i].quantiles == b.per_n[i].quantiles);
  }
}

TEST_CASE("constant integrand, non-Gaussian indices: simulated limit agrees with Fourier inversion") {
  EnsembleSpec s;
  s.alpha = 1.8;
  s.beta = 0.9;
  s.ns = {1024};
  s.samples = 4000;
  s.limit_samples = 4000;
  s.modulus_paths = 5;
  s.seed = 11;
  const EnsembleReport r = convergence_report(s, ReportOptions{4, false});
  REQUIRE(r.limit_vs_density.size() == s.probe_times.size());
  for (double k : r.limit_vs_density) CHECK(k < ks_critical_value(0.01, 4000));
  for (double k : r.per_n[0].ks_density) CHECK(k < 0.05);
}

TEST_CASE("KS against the Gaussian limit decreases in n (small n, where the bias dominates)") {
  // With n in {1, 4, 64} the finite-n error is large compared to sampling noise.
  int monotone = 0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    EnsembleSpec s;
    s.ns = {1, 4, 64};
    s.samples = 4000;
    s.modulus_paths = 1;
    s.probe_times = {1.0};
    s.seed = 100 + rep;
    const EnsembleReport r = convergence_report(s, ReportOptions{4, false});
    bool ok = true;
    for (std::size_t i = 1; i < r.per_n.size(); ++i) ok = ok && r.per_n[i].ks[0] <= r.per_n[i - 1].ks[0];
    monotone += ok;
  }
  CHECK(monotone >= 8);
}

TEST_CASE("report modulus is non-increasing in n" * doctest::should_fail()) {
  // Documents that the averaged M1 modulus of I_n grows with n for the Gaussian
  // case: more jumps per window give more room for interior excursions.
  EnsembleSpec s;
  s.seed = 7;
  s.samples = 400;
  s.modulus_paths = 200;
  const EnsembleReport r = convergence_report(s, ReportOptions{4, false});
  int good = 0, total = 0;
  for (std::size_t d = 0; d < s.deltas.size(); ++d) {
    for (std::size_t i = 1; i < r.per_n.size(); ++i) {
      good += r.per_n[i].modulus[d] <= r.per_n[i - 1].modulus[d];
      ++total;
    }
  }
  CHECK(good >= 0.8 * total);
}
