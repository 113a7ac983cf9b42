#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "ctrwlim/paths.hpp"

namespace ctrwlim {

/// Damped oscillator x'' + gamma x' + k x = forcing, with omega = sqrt(k).
struct OscillatorParams {
  enum class Regime { under, critical, over };

  double gamma = 1.0;
  double k = 1.0;

  double omega() const;
  /// sqrt(|omega^2 - gamma^2/4|); zero in the critical regime.
  double omega1() const;
  /// Critical when k equals gamma^2/4 to 1e-14 relative accuracy.
  Regime regime() const;
  void validate() const;
};

const char* to_string(OscillatorParams::Regime r);

/// Impulse response (Green function) of the position. Causal: G(t) = 0 for t < 0.
double green_position(const OscillatorParams& p, double t);
/// dG/dt, the velocity response; G_v(0) = 1 and G_v(t) = 0 for t < 0.
double green_velocity(const OscillatorParams& p, double t);

/// A deterministic bounded continuous integrand f together with its bound C_f.
class Integrand {
 public:
  using Function = std::function<double(double)>;

  static Integrand constant(double c);
  /// cos(frequency * s + phase)
  static Integrand cosine(double frequency = 1.0, double phase = 0.0);
  static Integrand green_position(const OscillatorParams& p);
  static Integrand green_velocity(const OscillatorParams& p);
  /// Linear interpolation of a polyline path; evaluation outside its horizon throws.
  static Integrand tabulated(const StepPath& polyline);
  /// `bound` must dominate |f| on every horizon the integrand is used with.
  static Integrand custom(Function f, double bound, std::string name);

  double operator()(double s) const { return f_(s); }
  /// C_f = sup |f| on [0, horizon] (exact for the built-ins, node maximum for tables).
  double bound(double horizon) const { return bound_(horizon); }
  /// Canonical text form; parse_integrand(name()) rebuilds built-ins.
  const std::string& name() const noexcept { return name_; }
  /// True for constant integrands, with the constant in `value`.
  bool is_constant(double* value = nullptr) const;

 private:
  Integrand(Function f, std::function<double(double)> bound, std::string name)
      : f_(std::move(f)), bound_(std::move(bound)), name_(std::move(name)) {}

  Function f_;
  std::function<double(double)> bound_;
  std::string name_;
  bool constant_ = false;
  double constant_value_ = 0.0;
};

/// Parses "name[:key=value,...]" or a bare number (a constant). Names:
///   const (c), cos (freq, phase), green_position (gamma, k), green_velocity (gamma, k).
Integrand parse_integrand(std::string_view spec);

/// I_n(t) = sum_{k <= N(n t)} f(T_k / n) Y_k n^(-beta/alpha): jumps at T_k / n.
StepPath integral_process(const Integrand& f, const RenewalSkeleton& skeleton,
                          const ScalingScheme& scheme, double horizon);

/// Grid approximation of int_0^t f(s) dL(D^{-1}(s)): the driver's jump Delta L_j at
/// real time tau_j = D(x_j) is weighted by f(tau_j) (= f(tau_j-), f continuous).
StepPath limit_integral(const Integrand& f, const TimeChangedDriver& driver);
StepPath limit_integral(const Integrand& f, double alpha, double beta, double step,
                        double horizon, SeedSpec seed);

/// sup over the driver's grid of |int_0^{D^{-1}(t)} f(D(s-)) dL(s) - int_0^t f(s) dL(D^{-1}(s))|
/// with both sides discretized on the same (D, L). The left side weighs Delta L_j with
/// f(D(x_{j-1})), the right side with f(D(x_j)).
double change_of_variables_check(const Integrand& f, const TimeChangedDriver& driver);
double change_of_variables_check(const Integrand& f, double alpha, double beta, double step,
                                 double horizon, SeedSpec seed);

struct RefinementPair {
  double coarse = 0.0;  ///< discrepancy at grid step `step`
  double fine = 0.0;    ///< discrepancy at step / 2, same randomness
};

/// Discrepancies at step and step/2 from one fine driver and its 2-coarsening.
RefinementPair change_of_variables_refinement(const Integrand& f, double alpha, double beta,
                                              double step, double horizon, SeedSpec seed);

enum class Response { position, velocity };

/// sum_{T_i/n <= t} K(t - T_i/n) Y_i n^(-beta/alpha) with K = G or G_v.
double oscillator_value(const OscillatorParams& p, const RenewalSkeleton& skeleton,
                        const ScalingScheme& scheme, double t, Response which);

/// oscillator_value sampled on `points` uniform nodes of [0, horizon], as a polyline.
StepPath oscillator_response(const OscillatorParams& p, const RenewalSkeleton& skeleton,
                             const ScalingScheme& scheme, double horizon, Response which,
                             std::size_t points = 2048);

}  // namespace ctrwlim
