#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctrwlim/diagnostics.hpp"
#include "ctrwlim/errors.hpp"
#include "ctrwlim/rng.hpp"
#include "ctrwlim/stable.hpp"
#include "oracles.hpp"

using namespace ctrwlim;

TEST_CASE("engine streams are reproducible and distinct") {
  Engine a({5, 1}, Substream::generic);
  Engine b({5, 1}, Substream::generic);
  Engine c({5, 2}, Substream::generic);
  Engine d({5, 1}, Substream::jumps);
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    same_c += x == c.next_u64();
    same_d += x == d.next_u64();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
}

TEST_CASE("uniform and exponential moments") {
  Engine e({11, 0}, Substream::generic);
  std::vector<double> u(100000), x(100000);
  for (auto& v : u) v = e.uniform();
  for (auto& v : x) v = e.exponential();
  CHECK(oracle::ks(u, [](double t) { return std::clamp(t, 0.0, 1.0); }) < 1.63 / std::sqrt(1e5));
  CHECK(oracle::ks(x, [](double t) { return 1.0 - std::exp(-t); }) < 1.63 / std::sqrt(1e5));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((StableLaw{0.0, 1.0, Skew::symmetric}.validate()), ParameterError);
  CHECK_THROWS_AS((StableLaw{2.1, 1.0, Skew::symmetric}.validate()), ParameterError);
  CHECK_THROWS_AS((StableLaw{1.0, 1.0, Skew::positive}.validate()), ParameterError);
  CHECK_THROWS_AS((StableLaw{1.5, -1.0, Skew::symmetric}.validate()), ParameterError);
  CHECK_THROWS_AS((MittagLefflerLaw{1.2, 1.0}.validate()), ParameterError);
  CHECK_NOTHROW((StableLaw{0.5, 1.0, Skew::positive}.validate()));
  CHECK(sample_symmetric_stable({1.5, 1.0, Skew::symmetric}, {1, 0}, 0).empty());
}

TEST_CASE("alpha = 2 symmetric sampler is Gaussian with variance 2") {
  const auto x = sample_symmetric_stable({2.0, 1.0, Skew::symmetric}, {1, 0}, 100000);
  const double var = oracle::variance(x);
  // SE of the sample variance of a normal: var * sqrt(2/(n-1)).
  CHECK(std::abs(var - 2.0) < 3.0 * 2.0 * std::sqrt(2.0 / 99999.0));
  CHECK(oracle::ks(x, [](double t) { return oracle::normal_cdf(t, 2.0); }) < 0.02);
}

TEST_CASE("alpha = 1.5: median zero and strict stability") {
  const StableLaw law{1.5, 1.0, Skew::symmetric};
  const auto x = sample_symmetric_stable(law, {2, 0}, 100000);
  // density at 0 of exp(-|k|^a) is Gamma(1 + 1/a) / pi
  const double f0 = std::tgamma(1.0 + 1.0 / 1.5) / std::numbers::pi;
  const double se = 1.0 / (2.0 * f0 * std::sqrt(100000.0));
  CHECK(std::abs(quantile(x, 0.5)) < 3.0 * se);

  const auto a = sample_symmetric_stable(law, {2, 1}, 100000);
  const auto b = sample_symmetric_stable(law, {2, 2}, 100000);
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = (a[i] + b[i]) / std::pow(2.0, 1.0 / 1.5);
  CHECK(ks_two_sample(s, x) < 0.02);
}

TEST_CASE("distinct streams pass a two-sample KS test") {
  const StableLaw law{1.3, 1.0, Skew::symmetric};
  const auto a = sample_symmetric_stable(law, {3, 0}, 10000);
  const auto b = sample_symmetric_stable(law, {3, 1}, 10000);
  CHECK(ks_two_sample(a, b) < ks_critical_value(0.01, 10000, 10000));
  CHECK(a == sample_symmetric_stable(law, {3, 0}, 10000));
}

TEST_CASE("one-sided stable sampler: positivity and Laplace transform") {
  for (auto [beta, s] : {std::pair{0.5, 1.0}, std::pair{0.9, 2.0}}) {
    const auto x = sample_subordinator_increment({beta, 1.0, Skew::positive}, {4, 0}, 100000);
    std::vector<double> e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      REQUIRE(x[i] > 0.0);
      e[i] = std::exp(-s * x[i]);
    }
    const double se = std::sqrt(oracle::variance(e) / static_cast<double>(e.size()));
    CHECK(std::abs(oracle::mean(e) - std::exp(-std::pow(s, beta))) < 3.0 * se);
  }
  // beta = 1/2 is the Levy law with c = 1/2: P(S <= x) = erfc(1 / (2 sqrt x)).
  const auto x = sample_subordinator_increment({0.5, 1.0, Skew::positive}, {4, 1}, 100000);
  CHECK(oracle::ks(x, [](double t) { return t <= 0 ? 0.0 : std::erfc(0.5 / std::sqrt(t)); }) < 1.63 / std::sqrt(1e5));
}

TEST_CASE("Mittag-Leffler waiting times") {
  SUBCASE("beta = 1 is Exp(1)") {
    const auto x = sample_ml_waiting_time({1.0, 1.0}, {5, 0}, 100000);
    CHECK(oracle::ks(x, [](double t) { return 1.0 - std::exp(-t); }) < 0.02);
    const double p = std::exp(-1.0);
    double surv = 0.0;
    for (double v : x) surv += v > 1.0;
    CHECK(std::abs(surv / 1e5 - p) < 3.0 * std::sqrt(p * (1 - p) / 1e5));
  }
  SUBCASE("beta = 0.5 survival has the erfc closed form") {
    const auto x = sample_ml_waiting_time({0.5, 1.0}, {5, 1}, 100000);
    const double p = oracle::ml_half(-2.0);  // P(J > 4) = E_{1/2}(-4^{1/2})
    double surv = 0.0;
    for (double v : x) surv += v > 4.0;
    CHECK(std::abs(surv / 1e5 - p) < 3.0 * std::sqrt(p * (1 - p) / 1e5));
    CHECK(oracle::ks(x, [](double t) { return 1.0 - oracle::ml_half(-std::sqrt(t)); }) < 1.63 / std::sqrt(1e5));
  }
  SUBCASE("beta = 0.7 survival at t = 1 against the series") {
    const auto x = sample_ml_waiting_time({0.7, 1.0}, {5, 2}, 100000);
    double p = 0.0;  // E_{0.7}(-1) by its power series, summed here
    for (int j = 0; j < 60; ++j) p += std::pow(-1.0, j) / std::tgamma(1.0 + 0.7 * j);
    double surv = 0.0;
    for (double v : x) surv += v > 1.0;
    CHECK(std::abs(surv / 1e5 - p) < 3.0 * std::sqrt(p * (1 - p) / 1e5));
  }
  SUBCASE("scale multiplies the variates") {
    const auto a = sample_ml_waiting_time({0.8, 1.0}, {5, 3}, 100);
    const auto b = sample_ml_waiting_time({0.8, 3.0}, {5, 3}, 100);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(3.0 * a[i]).epsilon(1e-14));
  }
}
