#include "ctrwlim/integrals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <map>
#include <numbers>
#include <string>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

double OscillatorParams::omega() const { return std::sqrt(k); }

double OscillatorParams::omega1() const { return std::sqrt(std::abs(k - 0.25 * gamma * gamma)); }

OscillatorParams::Regime OscillatorParams::regime() const {
  const double crit = 0.25 * gamma * gamma;
  if (std::abs(k - crit) <= 1e-14 * crit) return Regime::critical;
  return k > crit ? Regime::under : Regime::over;
}

void OscillatorParams::validate() const {
  detail::require(gamma > 0.0 && std::isfinite(gamma), "oscillator: gamma must be positive");
  detail::require(k > 0.0 && std::isfinite(k), "oscillator: k must be positive");
}

const char* to_string(OscillatorParams::Regime r) {
  switch (r) {
    case OscillatorParams::Regime::under: return "under";
    case OscillatorParams::Regime::critical: return "critical";
    case OscillatorParams::Regime::over: return "over";
  }
  return "?";
}

double green_position(const OscillatorParams& p, double t) {
  if (t <= 0.0) return 0.0;
  const double a = 0.5 * p.gamma;
  const double b = p.omega1();
  switch (p.regime()) {
    case OscillatorParams::Regime::under:
      return std::exp(-a * t) * std::sin(b * t) / b;
    case OscillatorParams::Regime::critical:
      return t * std::exp(-a * t);
    case OscillatorParams::Regime::over:
      // Written with exponentials once sinh(bt) could overflow.
      if (b * t < 1.0) return std::exp(-a * t) * std::sinh(b * t) / b;
      return (std::exp((b - a) * t) - std::exp(-(a + b) * t)) / (2.0 * b);
  }
  return 0.0;
}

double green_velocity(const OscillatorParams& p, double t) {
  if (t < 0.0) return 0.0;
  const double a = 0.5 * p.gamma;
  const double b = p.omega1();
  switch (p.regime()) {
    case OscillatorParams::Regime::under:
      return std::exp(-a * t) * (std::cos(b * t) - a * std::sin(b * t) / b);
    case OscillatorParams::Regime::critical:
      return (1.0 - a * t) * std::exp(-a * t);
    case OscillatorParams::Regime::over:
      if (b * t < 1.0) return std::exp(-a * t) * (std::cosh(b * t) - a * std::sinh(b * t) / b);
      return 0.5 * ((1.0 - a / b) * std::exp((b - a) * t) + (1.0 + a / b) * std::exp(-(a + b) * t));
  }
  return 1.0;
}

namespace {

// First interior extremum of G (which = 0) or G_v (which = 1); later extrema are
// smaller in magnitude, and G, G_v are monotone before it.
double first_extremum(const OscillatorParams& p, int which) {
  const double a = 0.5 * p.gamma;
  const double b = p.omega1();
  switch (p.regime()) {
    case OscillatorParams::Regime::under:
      return which == 0 ? std::atan(b / a) / b
                        : (std::numbers::pi - 2.0 * std::atan(a / b)) / b;
    case OscillatorParams::Regime::critical:
      return which == 0 ? 1.0 / a : 2.0 / a;
    case OscillatorParams::Regime::over:
      if (which == 0) return std::atanh(b / a) / b;
      // G_v = A e^{(b-a)t} + B e^{-(a+b)t}; G_v' = 0 where e^{2bt} = B(a+b) / (A(b-a)).
      {
        const double A = 0.5 * (1.0 - a / b);
        const double B = 0.5 * (1.0 + a / b);
        return std::log(B * (a + b) / (A * (b - a))) / (2.0 * b);
      }
  }
  return 0.0;
}

double green_bound(const OscillatorParams& p, int which, double horizon) {
  const auto g = [&](double t) {
    return std::abs(which == 0 ? green_position(p, t) : green_velocity(p, t));
  };
  double m = std::max(g(0.0), g(horizon));
  const double te = first_extremum(p, which);
  if (te > 0.0 && te < horizon) m = std::max(m, g(te));
  return m;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    detail::throw_parameter("integrand: cannot parse " + std::string(what) + " value '" +
                            std::string(s) + "'");
  }
  return v;
}

}  // namespace

Integrand Integrand::constant(double c) {
  detail::require(std::isfinite(c), "integrand: constant must be finite");
  Integrand f([c](double) { return c; }, [c](double) { return std::abs(c); },
              "const:c=" + fmt(c));
  f.constant_ = true;
  f.constant_value_ = c;
  return f;
}

Integrand Integrand::cosine(double frequency, double phase) {
  detail::require(std::isfinite(frequency) && std::isfinite(phase),
                  "integrand: cosine frequency and phase must be finite");
  auto bound = [frequency, phase](double horizon) {
    // |cos| reaches 1 where frequency*s + phase is a multiple of pi.
    const double lo = std::min(phase, frequency * horizon + phase);
    const double hi = std::max(phase, frequency * horizon + phase);
    if (std::floor(hi / std::numbers::pi) >= std::ceil(lo / std::numbers::pi)) return 1.0;
    return std::max(std::abs(std::cos(lo)), std::abs(std::cos(hi)));
  };
  return Integrand([frequency, phase](double s) { return std::cos(frequency * s + phase); },
                   bound, "cos:freq=" + fmt(frequency) + ",phase=" + fmt(phase));
}

Integrand Integrand::green_position(const OscillatorParams& p) {
  p.validate();
  return Integrand([p](double s) { return ctrwlim::green_position(p, s); },
                   [p](double h) { return green_bound(p, 0, h); },
                   "green_position:gamma=" + fmt(p.gamma) + ",k=" + fmt(p.k));
}

Integrand Integrand::green_velocity(const OscillatorParams& p) {
  p.validate();
  return Integrand([p](double s) { return ctrwlim::green_velocity(p, s); },
                   [p](double h) { return green_bound(p, 1, h); },
                   "green_velocity:gamma=" + fmt(p.gamma) + ",k=" + fmt(p.k));
}

Integrand Integrand::tabulated(const StepPath& polyline) {
  detail::require(polyline.kind() == PathKind::polyline,
                  "integrand: a tabulated integrand must be a continuous polyline");
  double m = 0.0;
  for (double v : polyline.values()) m = std::max(m, std::abs(v));
  return Integrand([polyline](double s) { return polyline(s); }, [m](double) { return m; },
                   "table");
}

Integrand Integrand::custom(Function f, double bound, std::string name) {
  detail::require(static_cast<bool>(f), "integrand: empty function");
  detail::require(bound >= 0.0 && std::isfinite(bound), "integrand: bound must be finite and >= 0");
  return Integrand(std::move(f), [bound](double) { return bound; }, std::move(name));
}

bool Integrand::is_constant(double* value) const {
  if (constant_ && value != nullptr) *value = constant_value_;
  return constant_;
}

Integrand parse_integrand(std::string_view spec) {
  detail::require(!spec.empty(), "integrand: empty specification");
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  std::map<std::string, double, std::less<>> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      detail::require(eq != std::string_view::npos && eq > 0,
                      "integrand: expected key=value, got '" + std::string(item) + "'");
      kv[std::string(item.substr(0, eq))] = parse_real(item.substr(eq + 1), item.substr(0, eq));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  auto take = [&](std::string_view key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](Integrand f) {
    if (!kv.empty()) {
      detail::throw_parameter("integrand: unknown parameter '" + kv.begin()->first + "' for '" +
                              std::string(name) + "'");
    }
    return f;
  };

  if (name == "const" || name == "constant") return finish(Integrand::constant(take("c", 1.0)));
  if (name == "cos" || name == "cosine") {
    const double w = take("freq", 1.0);
    return finish(Integrand::cosine(w, take("phase", 0.0)));
  }
  if (name == "green_position" || name == "G" || name == "green_velocity" || name == "Gv") {
    OscillatorParams p;
    p.gamma = take("gamma", p.gamma);
    p.k = take("k", p.k);
    const bool pos = name == "green_position" || name == "G";
    return finish(pos ? Integrand::green_position(p) : Integrand::green_velocity(p));
  }
  if (colon == std::string_view::npos) {
    double v = 0.0;
    const auto r = std::from_chars(spec.data(), spec.data() + spec.size(), v);
    if (r.ec == std::errc() && r.ptr == spec.data() + spec.size()) return Integrand::constant(v);
  }
  detail::throw_parameter("integrand: unknown integrand '" + std::string(spec) +
                          "' (expected const, cos, green_position, green_velocity or a number)");
}

StepPath integral_process(const Integrand& f, const RenewalSkeleton& skeleton,
                          const ScalingScheme& scheme, double horizon) {
  scheme.validate();
  detail::require(horizon > 0.0, "integral_process: horizon must be positive");
  const double n = static_cast<double>(scheme.n);
  const double operational = n * horizon;
  if (!(skeleton.reach() > operational)) {
    throw CoverageError("integral_process: renewal skeleton reaches t = " +
                        std::to_string(skeleton.reach()) + " but must exceed " +
                        std::to_string(operational));
  }
  const double h = scheme.space_factor();
  std::vector<double> times;
  std::vector<double> sizes;
  for (std::size_t i = 0; i < skeleton.size() && skeleton.epochs[i] <= operational; ++i) {
    const double s = std::min(skeleton.epochs[i] / n, horizon);
    times.push_back(s);
    sizes.push_back(f(s) * (h * skeleton.jumps[i]));
  }
  return StepPath::from_jumps(times, sizes, horizon);
}

StepPath limit_integral(const Integrand& f, const TimeChangedDriver& driver) {
  std::vector<double> times;
  std::vector<double> sizes;
  for (std::size_t j = 0; j < driver.clock.size() && driver.clock[j] <= driver.horizon; ++j) {
    times.push_back(driver.clock[j]);
    sizes.push_back(f(driver.clock[j]) * driver.levy_increments[j]);
  }
  return StepPath::from_jumps(times, sizes, driver.horizon);
}

StepPath limit_integral(const Integrand& f, double alpha, double beta, double step,
                        double horizon, SeedSpec seed) {
  return limit_integral(f, make_driver(alpha, beta, step, horizon, seed));
}

double change_of_variables_check(const Integrand& f, const TimeChangedDriver& driver) {
  double left = 0.0;
  double right = 0.0;
  double worst = 0.0;
  double prev_clock = 0.0;
  for (std::size_t j = 0; j < driver.clock.size() && driver.clock[j] <= driver.horizon; ++j) {
    const double dl = driver.levy_increments[j];
    left += f(prev_clock) * dl;
    right += f(driver.clock[j]) * dl;
    worst = std::max(worst, std::abs(left - right));
    prev_clock = driver.clock[j];
  }
  return worst;
}

double change_of_variables_check(const Integrand& f, double alpha, double beta, double step,
                                 double horizon, SeedSpec seed) {
  return change_of_variables_check(f, make_driver(alpha, beta, step, horizon, seed));
}

RefinementPair change_of_variables_refinement(const Integrand& f, double alpha, double beta,
                                              double step, double horizon, SeedSpec seed) {
  const TimeChangedDriver fine = make_driver(alpha, beta, 0.5 * step, horizon, seed, 2);
  return {change_of_variables_check(f, fine.coarsened(2)), change_of_variables_check(f, fine)};
}

double oscillator_value(const OscillatorParams& p, const RenewalSkeleton& skeleton,
                        const ScalingScheme& scheme, double t, Response which) {
  p.validate();
  scheme.validate();
  detail::require(t >= 0.0, "oscillator_value: t must be non-negative");
  const double n = static_cast<double>(scheme.n);
  if (!(skeleton.reach() > n * t)) {
    throw CoverageError("oscillator_value: renewal skeleton does not cover t");
  }
  const double h = scheme.space_factor();
  double sum = 0.0;
  for (std::size_t i = 0; i < skeleton.size() && skeleton.epochs[i] <= n * t; ++i) {
    const double lag = t - skeleton.epochs[i] / n;
    const double g = which == Response::position ? green_position(p, lag) : green_velocity(p, lag);
    sum += g * (h * skeleton.jumps[i]);
  }
  return sum;
}

StepPath oscillator_response(const OscillatorParams& p, const RenewalSkeleton& skeleton,
                             const ScalingScheme& scheme, double horizon, Response which,
                             std::size_t points) {
  detail::require(horizon > 0.0, "oscillator_response: horizon must be positive");
  detail::require(points >= 2, "oscillator_response: need at least two grid points");
  std::vector<double> t(points);
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    t[i] = i + 1 == points ? horizon
                           : horizon * static_cast<double>(i) / static_cast<double>(points - 1);
    v[i] = oscillator_value(p, skeleton, scheme, t[i], which);
  }
  return StepPath::polyline(std::move(t), std::move(v));
}

}  // namespace ctrwlim
