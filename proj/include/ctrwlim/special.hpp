#pragma once

#include <cstddef>
#include <vector>

namespace ctrwlim {

/// Controls evaluation of the Mittag-Leffler function E_beta on the negative axis.
///
/// For |z| <= series_radius the power series is summed in extended precision.
/// Beyond it the asymptotic expansion with `asymptotic_terms` terms is used when
/// its first omitted term is below rel_tol; otherwise E_beta(-x) is computed from
/// its spectral (completely monotone) integral representation.
struct MLEvalConfig {
  double series_radius = 1.0;
  double rel_tol = 1e-12;
  int max_terms = 2000;
  int asymptotic_terms = 8;

  void validate() const;
};

/// E_beta(z) = sum_j z^j / Gamma(1 + beta j) for 0 < beta <= 1 and z <= 0.
double ml_eval(double beta, double z, const MLEvalConfig& cfg = {});

/// n-th derivative of E_beta at z <= 0 from the term-wise differentiated series.
/// Throws EvaluationError when cancellation in the alternating series would
/// exceed cfg.rel_tol.
double ml_derivative(double beta, int n, double z, const MLEvalConfig& cfg = {});

/// P(N_beta(t) = n) = t^(beta n) / n! * E_beta^(n)(-t^beta).
double frac_poisson_pmf(double beta, double t, int n, const MLEvalConfig& cfg = {});

/// sum_n n * P(N_beta(t) = n), summed until the tail is negligible. Where the pmf
/// series is too ill-conditioned (large t^beta) the exact renewal function
/// t^beta / Gamma(1 + beta) is returned instead.
double frac_poisson_mean(double beta, double t, const MLEvalConfig& cfg = {});

/// Pointwise limit density u_{alpha,beta}(x, t) = t^(-beta/alpha) W(x t^(-beta/alpha)),
/// W(u) = (1/pi) int_0^inf cos(k u) E_beta(-k^alpha) dk. Returns +inf at x = 0
/// when the density is unbounded there (alpha <= 1, beta < 1).
double limit_density_at(double alpha, double beta, double t, double x);

struct GridSpec {
  double x_max = 10.0;
  std::size_t points = 801;
};

/// Tabulated limit density on a symmetric grid together with its cumulative
/// distribution at the nodes. Immutable after construction.
struct DensityGrid {
  std::vector<double> x_values;
  std::vector<double> density_values;
  std::vector<double> cdf_values;
  double t = 1.0;
  double alpha = 2.0;
  double beta = 1.0;
  /// Trapezoidal integral of the density over the grid.
  double mass = 0.0;
  /// Number of small negative quadrature values clamped to zero.
  std::size_t clamped_negative = 0;
  /// True when the grid avoids x = 0 because the density is unbounded there.
  bool origin_excluded = false;
};

DensityGrid limit_density(double alpha, double beta, double t, const GridSpec& grid = {});

/// Cumulative trapezoid of the tabulated density, anchored at F(0) = 1/2.
/// Throws RangeError when x is outside the grid.
double limit_cdf(const DensityGrid& grid, double x);

}  // namespace ctrwlim
