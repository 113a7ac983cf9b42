#include "ctrwlim/special.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

using std::numbers::pi;

void MLEvalConfig::validate() const {
  detail::require(series_radius > 0.0, "MLEvalConfig: series_radius must be positive");
  detail::require(rel_tol > 0.0, "MLEvalConfig: rel_tol must be positive");
  detail::require(max_terms >= 1, "MLEvalConfig: max_terms must be at least 1");
  detail::require(asymptotic_terms >= 1, "MLEvalConfig: asymptotic_terms must be at least 1");
}

namespace {

constexpr long double kLongEps = std::numeric_limits<long double>::epsilon();

void check_beta(double beta) {
  detail::require(beta > 0.0 && beta <= 1.0,
                  "Mittag-Leffler: beta must lie in (0, 1], got " + std::to_string(beta));
}

void check_z(double z) {
  detail::require(std::isfinite(z) && z <= 0.0,
                  "Mittag-Leffler: only z <= 0 is supported, got " + std::to_string(z));
}

// 1/Gamma(y), zero at the poles.
double rgamma(double y) {
  if (y <= 0.0 && std::abs(y - std::round(y)) < 1e-12) return 0.0;
  return 1.0 / std::tgamma(y);
}

// Alternating sum of exp(log_magnitude(j)) * (-1)^(j - first), j = first, first+1, ...
// Stops once the magnitudes are decreasing and below rel_tol * |sum|.
template <class LogMagnitude>
double alternating_series(LogMagnitude log_magnitude, int first, const MLEvalConfig& cfg,
                          const char* what, double abs_tol = 0.0) {
  long double sum = 0.0L;
  long double max_term = 0.0L;
  long double prev_log = std::numeric_limits<long double>::infinity();
  bool converged = false;
  for (int i = 0; i < cfg.max_terms; ++i) {
    const int j = first + i;
    const long double lm = log_magnitude(j);
    const long double mag = std::exp(lm);
    sum += (i % 2 == 0) ? mag : -mag;
    max_term = std::max(max_term, mag);
    if (i > 0 && lm < prev_log && mag <= 0.1L * (cfg.rel_tol * std::abs(sum) + abs_tol)) {
      converged = true;
      break;
    }
    prev_log = lm;
  }
  const double value = static_cast<double>(sum);
  if (!converged) {
    throw EvaluationError(std::string(what) + ": series did not converge within max_terms",
                          value);
  }
  // Rounding error of the alternating sum is governed by its largest term.
  if (max_term * 64.0L * kLongEps > cfg.rel_tol * std::abs(sum) + abs_tol) {
    throw EvaluationError(std::string(what) + ": cancellation exceeds rel_tol", value);
  }
  return value;
}

double ml_series(double beta, double z, const MLEvalConfig& cfg) {
  const long double log_x = std::log(static_cast<long double>(-z));
  return alternating_series(
      [&](int j) {
        return j * log_x - std::lgamma(1.0L + static_cast<long double>(beta) * j);
      },
      0, cfg, "ml_eval");
}

// E_beta(-x) ~ sum_{k=1..K} (-1)^(k+1) x^(-k) / Gamma(1 - beta k). Returns NaN when
// the first omitted non-zero term is not below rel_tol relative to the sum.
double ml_asymptotic(double beta, double x, const MLEvalConfig& cfg) {
  double sum = 0.0;
  double power = 1.0;
  for (int k = 1; k <= cfg.asymptotic_terms; ++k) {
    power /= x;
    sum += ((k % 2 == 1) ? 1.0 : -1.0) * power * rgamma(1.0 - beta * k);
  }
  double omitted = 0.0;
  for (int k = cfg.asymptotic_terms + 1; k <= cfg.asymptotic_terms + 4 && omitted == 0.0; ++k) {
    power /= x;
    omitted = power * std::abs(rgamma(1.0 - beta * k));
  }
  if (!(sum > 0.0) || omitted > cfg.rel_tol * sum) return std::numeric_limits<double>::quiet_NaN();
  return sum;
}

// E_beta(-x) = sin(beta pi)/(beta pi) * int_0^inf exp(-(x u)^(1/beta)) / (u^2 + 2u cos(beta pi) + 1) du,
// split at u = 1 and mapped onto [0, 1] twice.
double ml_integral(double beta, double x, const MLEvalConfig& cfg) {
  const double theta = beta * pi;
  const double c = std::cos(theta);
  const double inv_beta = 1.0 / beta;
  auto near = [&](double u) {
    return std::exp(-std::pow(x * u, inv_beta)) / (u * u + 2.0 * u * c + 1.0);
  };
  auto far = [&](double v) {
    if (v <= 0.0) return 0.0;
    return std::exp(-std::pow(x / v, inv_beta)) / (v * v + 2.0 * v * c + 1.0);
  };
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  const double tol = std::max(cfg.rel_tol * 0.1, 1e-15);
  double err_near = 0.0;
  double err_far = 0.0;
  double l1 = 0.0;
  const double i_near = integrator.integrate(near, 0.0, 1.0, tol, &err_near, &l1);
  const double i_far = integrator.integrate(far, 0.0, 1.0, tol, &err_far, &l1);
  const double value = std::sin(theta) / theta * (i_near + i_far);
  const double err = std::sin(theta) / theta * (err_near + err_far);
  if (!(err <= cfg.rel_tol * value)) {
    throw EvaluationError("ml_eval: integral representation did not reach rel_tol", value);
  }
  return value;
}

}  // namespace

double ml_eval(double beta, double z, const MLEvalConfig& cfg) {
  check_beta(beta);
  check_z(z);
  cfg.validate();
  if (z == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(z);
  if (-z <= cfg.series_radius) return ml_series(beta, z, cfg);
  const double asym = ml_asymptotic(beta, -z, cfg);
  if (!std::isnan(asym)) return asym;
  return ml_integral(beta, -z, cfg);
}

double ml_derivative(double beta, int n, double z, const MLEvalConfig& cfg) {
  check_beta(beta);
  check_z(z);
  detail::require(n >= 0, "ml_derivative: n must be non-negative");
  cfg.validate();
  if (n == 0) return ml_eval(beta, z, cfg);
  if (beta == 1.0) return std::exp(z);
  const long double b = beta;
  if (z == 0.0) {
    return static_cast<double>(std::exp(std::lgamma(n + 1.0L) - std::lgamma(1.0L + b * n)));
  }
  const long double log_x = std::log(static_cast<long double>(-z));
  return alternating_series(
      [&](int j) {
        return std::lgamma(j + 1.0L) - std::lgamma(static_cast<long double>(j - n + 1)) +
               (j - n) * log_x - std::lgamma(1.0L + b * j);
      },
      n, cfg, "ml_derivative");
}

double frac_poisson_pmf(double beta, double t, int n, const MLEvalConfig& cfg) {
  check_beta(beta);
  detail::require(t > 0.0 && std::isfinite(t), "frac_poisson_pmf: t must be positive");
  detail::require(n >= 0, "frac_poisson_pmf: n must be non-negative");
  cfg.validate();
  if (beta == 1.0) {
    return std::exp(n * std::log(t) - t - std::lgamma(n + 1.0));
  }
  if (n == 0) return ml_eval(beta, -std::pow(t, beta), cfg);
  // sum_{k>=n} (-1)^(k-n) C(k, n) t^(beta k) / Gamma(1 + beta k), in log space.
  const long double b = beta;
  const long double log_t = std::log(static_cast<long double>(t));
  const long double log_nfact = std::lgamma(n + 1.0L);
  const double p = alternating_series(
      [&](int k) {
        return std::lgamma(k + 1.0L) - log_nfact - std::lgamma(static_cast<long double>(k - n + 1)) +
               b * k * log_t - std::lgamma(1.0L + b * k);
      },
      n, cfg, "frac_poisson_pmf", cfg.rel_tol * 1e-3);
  return std::clamp(p, 0.0, 1.0);
}

double frac_poisson_mean(double beta, double t, const MLEvalConfig& cfg) {
  if (beta == 1.0) return t;
  double mean = 0.0;
  try {
    for (int n = 1; n < cfg.max_terms; ++n) {
      const double p = frac_poisson_pmf(beta, t, n, cfg);
      mean += n * p;
      if (n > 2.0 * mean + 10.0 && n * p < 1e-15 * mean) return mean;
    }
  } catch (const EvaluationError&) {
    // The pmf series cancels catastrophically once t^beta is large; the renewal
    // function of Mittag-Leffler waiting times is known in closed form.
    return std::pow(t, beta) / std::tgamma(1.0 + beta);
  }
  throw EvaluationError("frac_poisson_mean: tail did not vanish within max_terms", mean);
}

namespace {

// Characteristic function of the limit law at t = 1.
double limit_charfn(double alpha, double beta, double kappa) {
  if (kappa <= 0.0) return 1.0;
  const double x = std::pow(kappa, alpha);
  if (beta == 1.0) return std::exp(-x);
  return ml_eval(beta, -x);
}

// (1/pi) int_0^inf E_beta(-k^alpha) dk.
double limit_w_at_origin(double alpha, double beta) {
  using boost::math::quadrature::gauss_kronrod;
  if (beta == 1.0) {
    const double cut = std::pow(45.0, 1.0 / alpha);
    return gauss_kronrod<double, 31>::integrate(
               [&](double k) { return limit_charfn(alpha, beta, k); }, 0.0, cut, 20, 1e-13) /
           pi;
  }
  if (alpha <= 1.0) return std::numeric_limits<double>::infinity();
  // Integrate up to where the asymptotic expansion is accurate, then add its tail exactly.
  const double x_cut = 400.0;
  const double cut = std::pow(x_cut, 1.0 / alpha);
  const double body = gauss_kronrod<double, 31>::integrate(
      [&](double k) { return limit_charfn(alpha, beta, k); }, 0.0, cut, 20, 1e-13);
  double tail = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    tail += sign * rgamma(1.0 - beta * k) * std::pow(cut, 1.0 - alpha * k) / (alpha * k - 1.0);
  }
  return (body + tail) / pi;
}

class LimitDensityEvaluator {
 public:
  LimitDensityEvaluator(double alpha, double beta)
      : alpha_(alpha), beta_(beta), fourier_(1e-9) {}

  double w(double u) {
    u = std::abs(u);
    if (u == 0.0) return limit_w_at_origin(alpha_, beta_);
    auto phi = [this](double k) { return limit_charfn(alpha_, beta_, k); };
    const auto [value, err] = fourier_.integrate(phi, u);
    (void)err;
    return value / pi;
  }

 private:
  double alpha_;
  double beta_;
  boost::math::quadrature::ooura_fourier_cos<double> fourier_;
};

void check_indices(double alpha, double beta, double t) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "limit density: alpha must lie in (0, 2]");
  check_beta(beta);
  detail::require(t > 0.0 && std::isfinite(t), "limit density: t must be positive");
}

}  // namespace

double limit_density_at(double alpha, double beta, double t, double x) {
  check_indices(alpha, beta, t);
  const double s = std::pow(t, -beta / alpha);
  LimitDensityEvaluator eval(alpha, beta);
  return s * eval.w(x * s);
}

DensityGrid limit_density(double alpha, double beta, double t, const GridSpec& spec) {
  check_indices(alpha, beta, t);
  detail::require(spec.x_max > 0.0, "limit_density: x_max must be positive");
  detail::require(spec.points >= 3, "limit_density: at least 3 grid points required");

  DensityGrid grid;
  grid.alpha = alpha;
  grid.beta = beta;
  grid.t = t;
  std::size_t points = spec.points;
  const bool singular_origin = alpha <= 1.0 && beta < 1.0;
  if (singular_origin && points % 2 == 1) ++points;
  grid.origin_excluded = singular_origin;

  const double h = 2.0 * spec.x_max / static_cast<double>(points - 1);
  grid.x_values.resize(points);
  grid.density_values.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid.x_values[i] = -spec.x_max + h * static_cast<double>(i);
  }
  // Odd grids contain the origin at the centre node; even grids straddle it.
  const std::size_t half = points / 2;
  if (points % 2 == 1) grid.x_values[half] = 0.0;

  const double s = std::pow(t, -beta / alpha);
  LimitDensityEvaluator eval(alpha, beta);
  for (std::size_t i = half; i < points; ++i) {
    const std::size_t mirror = points - 1 - i;
    double u = s * eval.w(grid.x_values[i] * s);
    if (u < 0.0) {
      u = 0.0;
      grid.clamped_negative += (i == mirror) ? 1 : 2;
    }
    grid.density_values[i] = u;
    grid.density_values[mirror] = u;
    grid.x_values[mirror] = -grid.x_values[i];
  }

  // Node CDF anchored at F(0) = 1/2, integrating outward by trapezoids.
  grid.cdf_values.assign(points, 0.5);
  double acc = 0.0;
  if (points % 2 == 0) {
    acc = grid.density_values[half] * grid.x_values[half];
    grid.cdf_values[half] = 0.5 + acc;
    grid.cdf_values[half - 1] = 0.5 - acc;
  }
  for (std::size_t i = half + 1; i < points; ++i) {
    acc += 0.5 * (grid.density_values[i] + grid.density_values[i - 1]) *
           (grid.x_values[i] - grid.x_values[i - 1]);
    grid.cdf_values[i] = 0.5 + acc;
    grid.cdf_values[points - 1 - i] = 0.5 - acc;
  }
  grid.mass = 2.0 * acc;
  for (auto& f : grid.cdf_values) f = std::clamp(f, 0.0, 1.0);
  return grid;
}

double limit_cdf(const DensityGrid& grid, double x) {
  const auto& xs = grid.x_values;
  if (xs.empty() || x < xs.front() || x > xs.back() || std::isnan(x)) {
    throw RangeError("limit_cdf: x = " + std::to_string(x) + " is outside the density grid");
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return grid.cdf_values.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double dx = x - xs[i];
  const double width = xs[i + 1] - xs[i];
  const double u0 = grid.density_values[i];
  const double u1 = grid.density_values[i + 1];
  // Exact integral of the linear interpolant of the density over [x_i, x].
  const double ux = u0 + (u1 - u0) * dx / width;
  const double value = grid.cdf_values[i] + 0.5 * (u0 + ux) * dx;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace ctrwlim
