#include "ctrwlim/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

using std::numbers::pi;

void StableLaw::validate() const {
  detail::require(alpha > 0.0 && alpha <= 2.0,
                  "stable law: alpha must lie in (0, 2], got " + std::to_string(alpha));
  detail::require(scale > 0.0 && std::isfinite(scale),
                  "stable law: scale must be positive, got " + std::to_string(scale));
  if (skew == Skew::positive) {
    detail::require(alpha < 1.0,
                    "stable law: totally skewed laws require alpha < 1, got " +
                        std::to_string(alpha));
  }
}

void MittagLefflerLaw::validate() const {
  detail::require(beta > 0.0 && beta <= 1.0,
                  "Mittag-Leffler law: beta must lie in (0, 1], got " + std::to_string(beta));
  detail::require(scale > 0.0 && std::isfinite(scale),
                  "Mittag-Leffler law: scale must be positive, got " + std::to_string(scale));
}

// Chambers–Mallows–Stuck with zero skewness.
double draw_symmetric_stable(double alpha, Engine& engine) {
  if (alpha == 2.0) return std::numbers::sqrt2 * engine.normal();
  const double v = pi * (engine.uniform_open() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = engine.exponential();
  const double cv = std::cos(v);
  return std::sin(alpha * v) / std::pow(cv, 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

// Kanter's representation of the one-sided law with Laplace transform exp(-s^alpha).
double draw_positive_stable(double alpha, Engine& engine) {
  const double u = pi * engine.uniform_open();
  const double w = engine.exponential();
  const double s = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
                   std::pow(std::sin((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
  // Underflow guard for very small alpha; the law has no atom at 0.
  return std::max(s, std::numeric_limits<double>::min());
}

// J = W * (sin(beta pi (1-V)) / sin(beta pi V))^(1/beta), W ~ Exp(1).
double draw_mittag_leffler(double beta, Engine& engine) {
  const double w = engine.exponential();
  if (beta == 1.0) return w;
  const double v = engine.uniform_open();
  const double theta = beta * pi;
  const double ratio = std::sin(theta * (1.0 - v)) / std::sin(theta * v);
  return w * std::pow(ratio, 1.0 / beta);
}

std::vector<double> sample_symmetric_stable(const StableLaw& law, SeedSpec seed,
                                            std::size_t count) {
  law.validate();
  detail::require(law.skew == Skew::symmetric,
                  "sample_symmetric_stable: law must be symmetric");
  Engine engine(seed, Substream::generic);
  std::vector<double> out(count);
  for (auto& x : out) x = law.scale * draw_symmetric_stable(law.alpha, engine);
  return out;
}

std::vector<double> sample_subordinator_increment(const StableLaw& law, SeedSpec seed,
                                                  std::size_t count) {
  detail::require(law.skew == Skew::positive,
                  "sample_subordinator_increment: law must be totally positively skewed");
  law.validate();
  Engine engine(seed, Substream::generic);
  std::vector<double> out(count);
  for (auto& x : out) x = law.scale * draw_positive_stable(law.alpha, engine);
  return out;
}

std::vector<double> sample_ml_waiting_time(const MittagLefflerLaw& law, SeedSpec seed,
                                           std::size_t count) {
  law.validate();
  Engine engine(seed, Substream::generic);
  std::vector<double> out(count);
  for (auto& x : out) x = law.scale * draw_mittag_leffler(law.beta, engine);
  return out;
}

}  // namespace ctrwlim
