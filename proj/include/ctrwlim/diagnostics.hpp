#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrwlim/integrals.hpp"
#include "ctrwlim/special.hpp"

namespace ctrwlim {

/// sup_x |F_n(x) - cdf(x)| over the sorted sample. Throws on an empty sample.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov–Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical value of the KS distance at significance `level`:
/// sqrt(-ln(level/2)/2) * sqrt(1/n + 1/m); m = 0 means a one-sample test.
double ks_critical_value(double level, std::size_t n, std::size_t m = 0);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> sample, double p);

struct MeanCheck {
  double t = 0.0;
  double expected = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  bool pass = false;
};

/// Compares the mean of N_beta(t) samples with sum_n n P(N_beta(t) = n); passes
/// when |z| < 3.
MeanCheck mean_check(double beta, double t, std::span<const double> samples,
                     const MLEvalConfig& cfg = {});

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Work is handed out in
/// index order; results must be written to per-index slots to stay deterministic.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

struct EnsembleSpec {
  double alpha = 2.0;
  double beta = 1.0;
  std::vector<std::uint64_t> ns{256, 1024, 4096};
  std::string integrand = "const:c=1";
  double horizon = 1.0;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::vector<double> probe_times{0.25, 0.5, 1.0};
  std::vector<double> deltas{0.2, 0.1, 0.05, 0.02};
  /// Paths per n entering the modulus average (the first ones by stream id).
  std::size_t modulus_paths = 200;
  /// Simulated limit paths (unused in the Gaussian case alpha = 2, beta = 1).
  std::size_t limit_samples = 10000;
  double limit_step = 1.0 / 1024.0;
  /// Points of the Fourier-inverted density grid used for the constant-integrand check.
  std::size_t density_points = 1001;

  void validate() const;
};

struct NRecord {
  std::uint64_t n = 0;
  std::vector<double> ks;          ///< per probe time: KS to the limit law
  std::vector<double> ks_density;  ///< per probe time: KS to the Fourier CDF (constant f only)
  std::vector<double> mean;        ///< per probe time
  std::vector<std::vector<double>> quantiles;  ///< per probe time, at quantile_levels()
  std::vector<double> modulus;     ///< per delta: average m1_modulus(I_n, delta)
  std::vector<MeanCheck> mean_checks;  ///< per probe time: N_beta(n t) against the pmf mean
  std::optional<double> wall_sec;
};

struct EnsembleReport {
  EnsembleSpec spec;
  std::string integrand;   ///< canonical integrand name
  std::string limit_method;  ///< "gaussian" or "simulation"
  /// Constant integrand, non-Gaussian case: KS of the simulated limit sample to the
  /// Fourier-inverted CDF, per probe time (the two limit pipelines checked against each other).
  std::vector<double> limit_vs_density;
  std::vector<NRecord> per_n;
  std::optional<double> runtime_sec;
};

std::span<const double> quantile_levels();

struct ReportOptions {
  unsigned jobs = 1;
  /// Record wall-clock times; off by default so reports are byte-reproducible.
  bool timing = false;
};

/// Common random numbers: path i uses stream (seed, i) for every n, with a skeleton
/// covering n_max * horizon. Limit paths use streams (seed, 2^40 + i).
EnsembleReport convergence_report(const EnsembleSpec& spec, const ReportOptions& options = {});
EnsembleReport convergence_report(const EnsembleSpec& spec, const Integrand& f,
                                  const ReportOptions& options = {});

}  // namespace ctrwlim
