#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctrwlim/errors.hpp"
#include "ctrwlim/special.hpp"
#include "oracles.hpp"

using namespace ctrwlim;

TEST_CASE("ml_eval special values") {
  for (double b : {0.3, 0.5, 0.9, 1.0}) CHECK(ml_eval(b, 0.0) == 1.0);
  CHECK(ml_eval(1.0, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(ml_eval(1.0, -30.0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-10));
  CHECK(ml_eval(0.5, -1.0) == doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(ml_eval(1.5, -1.0), ParameterError);
  CHECK_THROWS_AS(ml_eval(0.5, 1.0), ParameterError);
}

TEST_CASE("ml_eval(1/2, z) matches exp(z^2) erfc(-z) on [-5, 0]") {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double z = -5.0 * i / 199.0;
    worst = std::max(worst, std::abs(ml_eval(0.5, z) / oracle::ml_half(z) - 1.0));
  }
  CHECK(worst < 1e-8);
  // far into the asymptotic / integral regime as well
  for (double z : {-8.0, -15.0, -40.0}) CHECK(ml_eval(0.5, z) == doctest::Approx(oracle::ml_half(z)).epsilon(1e-8));
}

TEST_CASE("E_beta(-t^beta) is decreasing and in (0, 1]") {
  for (double b : {0.2, 0.5, 0.7, 0.9, 1.0}) {
    double prev = 1.0;
    for (int i = 1; i <= 400; ++i) {
      const double t = 0.05 * i;
      const double v = ml_eval(b, -std::pow(t, b));
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("ml_derivative") {
  for (double z : {0.0, -0.3, -1.7}) CHECK(ml_derivative(0.6, 0, z) == doctest::Approx(ml_eval(0.6, z)).epsilon(1e-12));
  for (int n = 0; n < 5; ++n) CHECK(ml_derivative(1.0, n, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const double h = 1e-4;
  for (double b : {0.5, 0.7, 0.9}) {
    for (int i = 0; i < 100; ++i) {
      const double z = -h - (2.0 - 2 * h) * i / 99.0;
      const double fd = (ml_eval(b, z + h) - ml_eval(b, z - h)) / (2 * h);
      CHECK(std::abs(ml_derivative(b, 1, z) - fd) < 1e-6);
    }
  }
  CHECK_THROWS_AS(ml_derivative(0.7, -1, -1.0), ParameterError);
}

TEST_CASE("fractional Poisson pmf") {
  CHECK(frac_poisson_pmf(1.0, 1.0, 2) == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-12));
  for (int n = 0; n < 10; ++n) {
    CHECK(frac_poisson_pmf(1.0, 1.5, n) ==
          doctest::Approx(std::exp(-1.5) * std::pow(1.5, n) / std::tgamma(n + 1.0)).epsilon(1e-11));
  }
  CHECK(frac_poisson_pmf(0.7, 1.3, 0) == doctest::Approx(ml_eval(0.7, -std::pow(1.3, 0.7))).epsilon(1e-14));
  for (double b : {0.5, 0.7, 0.9, 1.0}) {
    for (double t : {0.1, 1.0, 2.0}) {
      double total = 0.0;
      for (int n = 0; n <= 60; ++n) {
        const double p = frac_poisson_pmf(b, t, n);
        CHECK(p >= 0.0);
        total += p;
      }
      CHECK(std::abs(total - 1.0) < 1e-6);
    }
  }
  CHECK(frac_poisson_mean(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(frac_poisson_mean(0.7, 1.0) == doctest::Approx(1.0 / std::tgamma(1.7)).epsilon(1e-8));
  CHECK(frac_poisson_mean(0.5, 3.0) == doctest::Approx(std::sqrt(3.0) / std::tgamma(1.5)).epsilon(1e-8));
}

TEST_CASE("limit density: Gaussian and Cauchy closed forms") {
  const DensityGrid g = limit_density(2.0, 1.0, 1.0, {10.0, 801});
  double worst = 0.0;
  for (std::size_t i = 0; i < g.x_values.size(); ++i) {
    worst = std::max(worst, std::abs(g.density_values[i] - oracle::normal_pdf(g.x_values[i], 2.0)));
  }
  CHECK(worst < 1e-4);
  CHECK(g.mass == doctest::Approx(1.0).epsilon(1e-6));

  const DensityGrid g3 = limit_density(2.0, 1.0, 3.0, {20.0, 401});
  for (std::size_t i = 0; i < g3.x_values.size(); ++i) {
    CHECK(std::abs(g3.density_values[i] - oracle::normal_pdf(g3.x_values[i], 6.0)) < 1e-4);
  }

  const DensityGrid c = limit_density(1.0, 1.0, 1.0, {10.0, 801});
  for (std::size_t i = 0; i < c.x_values.size(); ++i) {
    const double x = c.x_values[i];
    CHECK(std::abs(c.density_values[i] - 1.0 / (std::numbers::pi * (1.0 + x * x))) < 1e-4);
  }
}

TEST_CASE("limit density symmetry and cdf") {
  for (auto [a, b] : {std::pair{1.8, 0.9}, std::pair{1.5, 0.6}, std::pair{0.8, 0.7}}) {
    const DensityGrid g = limit_density(a, b, 1.0, {15.0, 600});
    const std::size_t n = g.x_values.size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g.x_values[i] == -g.x_values[n - 1 - i]);
      CHECK(std::abs(g.density_values[i] - g.density_values[n - 1 - i]) <= 1e-12);
      CHECK(g.density_values[i] >= 0.0);
    }
    CHECK(g.origin_excluded == (a <= 1.0 && b < 1.0));
    CHECK(limit_cdf(g, 0.0) == 0.5);
    for (double x : {0.3, 1.0, 4.0}) CHECK(limit_cdf(g, x) + limit_cdf(g, -x) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const DensityGrid g = limit_density(2.0, 1.0, 1.0);
  CHECK(limit_cdf(g, 1.0) == doctest::Approx(oracle::normal_cdf(1.0, 2.0)).epsilon(1e-5));
  CHECK(limit_cdf(g, 10.0) >= 0.999);
  CHECK_THROWS_AS(limit_cdf(g, 11.0), RangeError);
  CHECK(limit_density_at(2.0, 1.0, 1.0, 0.7) == doctest::Approx(oracle::normal_pdf(0.7, 2.0)).epsilon(1e-8));
  CHECK(std::isinf(limit_density_at(0.8, 0.7, 1.0, 0.0)));
}

TEST_CASE("MLEvalConfig validation") {
  MLEvalConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  CHECK_THROWS_AS(limit_density(2.0, 1.0, -1.0), ParameterError);
}
