#include "ctrwlim/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "ctrwlim/errors.hpp"
#include "ctrwlim/skorokhod.hpp"

namespace ctrwlim {

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  detail::require(!sample.empty(), "ks_statistic: sample must be non-empty");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  detail::require(!a.empty() && !b.empty(), "ks_two_sample: samples must be non-empty");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_critical_value(double level, std::size_t n, std::size_t m) {
  detail::require(level > 0.0 && level < 1.0, "ks_critical_value: level must lie in (0, 1)");
  detail::require(n > 0, "ks_critical_value: sample size must be positive");
  const double c = std::sqrt(-0.5 * std::log(0.5 * level));
  double inv = 1.0 / static_cast<double>(n);
  if (m > 0) inv += 1.0 / static_cast<double>(m);
  return c * std::sqrt(inv);
}

double quantile(std::vector<double> sample, double p) {
  detail::require(!sample.empty(), "quantile: sample must be non-empty");
  detail::require(p >= 0.0 && p <= 1.0, "quantile: level must lie in [0, 1]");
  const double h = p * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(lo), sample.end());
  const double a = sample[lo];
  if (lo + 1 >= sample.size()) return a;
  const double b = *std::min_element(sample.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                                     sample.end());
  return a + (h - static_cast<double>(lo)) * (b - a);
}

MeanCheck mean_check(double beta, double t, std::span<const double> samples,
                     const MLEvalConfig& cfg) {
  detail::require(samples.size() >= 2, "mean_check: need at least two samples");
  detail::require(t > 0.0, "mean_check: t must be positive");
  MeanCheck out;
  out.t = t;
  out.expected = frac_poisson_mean(beta, t, cfg);
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.empirical = sum / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - out.empirical) * (v - out.empirical);
  out.standard_error = std::sqrt(ss / (n - 1.0) / n);
  const double diff = out.empirical - out.expected;
  out.z = out.standard_error > 0.0 ? diff / out.standard_error
                                   : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
  out.pass = std::abs(out.z) < 3.0;
  return out;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const unsigned n = std::min<std::size_t>(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void EnsembleSpec::validate() const {
  detail::require(alpha > 0.0 && alpha <= 2.0, "ensemble: alpha must lie in (0, 2]");
  detail::require(beta > 0.0 && beta <= 1.0, "ensemble: beta must lie in (0, 1]");
  detail::require(!ns.empty(), "ensemble: need at least one n");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    detail::require(ns[i] >= 1, "ensemble: n must be positive");
    detail::require(i == 0 || ns[i] > ns[i - 1], "ensemble: n sequence must be strictly increasing");
  }
  detail::require(horizon > 0.0 && std::isfinite(horizon), "ensemble: horizon must be positive");
  detail::require(samples >= 100, "ensemble: sample count must be at least 100");
  detail::require(!probe_times.empty(), "ensemble: need at least one probe time");
  for (double t : probe_times) {
    detail::require(t > 0.0 && t <= horizon, "ensemble: probe times must lie in (0, horizon]");
  }
  for (double d : deltas) detail::require(d > 0.0, "ensemble: deltas must be positive");
  detail::require(limit_step > 0.0, "ensemble: limit step must be positive");
  detail::require(limit_samples >= 100 || (alpha == 2.0 && beta == 1.0),
                  "ensemble: limit sample count must be at least 100");
  detail::require(density_points >= 3, "ensemble: density grid needs at least 3 points");
}

std::span<const double> quantile_levels() {
  static constexpr std::array<double, 5> levels{0.05, 0.25, 0.5, 0.75, 0.95};
  return levels;
}

namespace {

constexpr std::uint64_t limit_stream_base = std::uint64_t{1} << 40;

double gaussian_cdf(double x, double sigma) {
  if (sigma == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

// 2 * int_0^t f(s)^2 ds: the variance of int f dL for L with E e^{ikL(1)} = e^{-k^2}.
double gaussian_variance(const Integrand& f, double t) {
  double c = 0.0;
  if (f.is_constant(&c)) return 2.0 * c * c * t;
  return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                   [&](double s) { return f(s) * f(s); }, 0.0, t, 15, 1e-12);
}

std::vector<double> uniform_probes(double horizon) {
  constexpr int grid = 256;
  std::vector<double> a(grid);
  for (int i = 0; i < grid; ++i) a[i] = i + 1 == grid ? horizon : horizon * i / (grid - 1);
  return a;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EnsembleReport convergence_report(const EnsembleSpec& spec, const ReportOptions& options) {
  return convergence_report(spec, parse_integrand(spec.integrand), options);
}

EnsembleReport convergence_report(const EnsembleSpec& spec, const Integrand& f,
                                  const ReportOptions& options) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t P = spec.probe_times.size();
  const std::size_t K = spec.ns.size();
  const std::size_t D = spec.deltas.size();
  const std::size_t S = spec.samples;
  const std::size_t M = std::min(spec.modulus_paths, S);
  const CtrwLaws laws{{spec.alpha, 1.0, Skew::symmetric}, {spec.beta, 1.0}};
  const std::uint64_t n_max = spec.ns.back();
  const auto probes = uniform_probes(spec.horizon);

  // values[k][p][i], counts[k][p][i], modulus[k][d][i]
  using Table = std::vector<std::vector<std::vector<double>>>;
  Table values(K, std::vector<std::vector<double>>(P, std::vector<double>(S)));
  Table counts = values;
  Table modulus(K, std::vector<std::vector<double>>(D, std::vector<double>(M)));
  std::vector<double> seconds(K, 0.0);
  std::mutex seconds_mutex;

  parallel_for(S, options.jobs, [&](std::size_t i) {
    SkeletonSource source(laws, SeedSpec{spec.seed, i});
    const RenewalSkeleton& sk = source.cover(static_cast<double>(n_max) * spec.horizon);
    for (std::size_t k = 0; k < K; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const ScalingScheme scheme{spec.ns[k], spec.alpha, spec.beta};
      const StepPath I = integral_process(f, sk, scheme, spec.horizon);
      for (std::size_t p = 0; p < P; ++p) {
        const double t = spec.probe_times[p];
        values[k][p][i] = I(t);
        const double op = static_cast<double>(spec.ns[k]) * t;
        counts[k][p][i] = static_cast<double>(
            std::upper_bound(sk.epochs.begin(), sk.epochs.end(), op) - sk.epochs.begin());
      }
      if (i < M) {
        for (std::size_t d = 0; d < D; ++d) modulus[k][d][i] = m1_modulus(I, spec.deltas[d], probes);
      }
      if (options.timing) {
        const std::lock_guard lock(seconds_mutex);
        seconds[k] += seconds_since(t0);
      }
    }
  });

  EnsembleReport report;
  report.spec = spec;
  report.integrand = f.name();
  const bool gaussian = spec.alpha == 2.0 && spec.beta == 1.0;
  report.limit_method = gaussian ? "gaussian" : "simulation";

  // Limit law at each probe time.
  std::vector<std::function<double(double)>> limit_cdf_at(P);
  std::vector<std::vector<double>> limit_sample(P);
  if (gaussian) {
    for (std::size_t p = 0; p < P; ++p) {
      const double sigma = std::sqrt(gaussian_variance(f, spec.probe_times[p]));
      limit_cdf_at[p] = [sigma](double x) { return gaussian_cdf(x, sigma); };
    }
  } else {
    const std::size_t L = spec.limit_samples;
    for (auto& v : limit_sample) v.assign(L, 0.0);
    parallel_for(L, options.jobs, [&](std::size_t i) {
      const TimeChangedDriver driver = make_driver(spec.alpha, spec.beta, spec.limit_step,
                                                   spec.horizon,
                                                   SeedSpec{spec.seed, limit_stream_base + i});
      const StepPath lim = limit_integral(f, driver);
      for (std::size_t p = 0; p < P; ++p) limit_sample[p][i] = lim(spec.probe_times[p]);
    });
  }

  // Fourier-inverted CDF for constant integrands c L(D^{-1}(t)).
  std::vector<std::function<double(double)>> density_cdf(P);
  double c = 0.0;
  if (!gaussian && f.is_constant(&c) && c != 0.0) {
    for (std::size_t p = 0; p < P; ++p) {
      const double t = spec.probe_times[p];
      try {
        auto grid = std::make_shared<DensityGrid>(limit_density(
            spec.alpha, spec.beta, t, GridSpec{40.0 * std::pow(t, spec.beta / spec.alpha),
                                              spec.density_points}));
        const double lo = grid->x_values.front();
        const double hi = grid->x_values.back();
        const double ac = std::abs(c);
        density_cdf[p] = [grid, lo, hi, ac](double x) {
          return limit_cdf(*grid, std::clamp(x / ac, lo, hi));
        };
      } catch (const EvaluationError&) {
        density_cdf[p] = nullptr;
      }
    }
    report.limit_vs_density.resize(P, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t p = 0; p < P; ++p) {
      if (density_cdf[p]) report.limit_vs_density[p] = ks_statistic(limit_sample[p], density_cdf[p]);
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    NRecord rec;
    rec.n = spec.ns[k];
    for (std::size_t p = 0; p < P; ++p) {
      const auto& v = values[k][p];
      rec.ks.push_back(gaussian ? ks_statistic(v, limit_cdf_at[p])
                                : ks_two_sample(v, limit_sample[p]));
      if (!report.limit_vs_density.empty()) {
        rec.ks_density.push_back(density_cdf[p] ? ks_statistic(v, density_cdf[p])
                                                : std::numeric_limits<double>::quiet_NaN());
      }
      double sum = 0.0;
      for (double x : v) sum += x;
      rec.mean.push_back(sum / static_cast<double>(v.size()));
      std::vector<double> q;
      for (double level : quantile_levels()) q.push_back(quantile(v, level));
      rec.quantiles.push_back(std::move(q));
      rec.mean_checks.push_back(mean_check(
          spec.beta, static_cast<double>(spec.ns[k]) * spec.probe_times[p], counts[k][p]));
    }
    for (std::size_t d = 0; d < D; ++d) {
      double sum = 0.0;
      for (double w : modulus[k][d]) sum += w;
      rec.modulus.push_back(M > 0 ? sum / static_cast<double>(M) : 0.0);
    }
    if (options.timing) rec.wall_sec = seconds[k];
    report.per_n.push_back(std::move(rec));
  }
  if (options.timing) report.runtime_sec = seconds_since(start);
  return report;
}

}  // namespace ctrwlim
