#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctrwlim/rng.hpp"
#include "ctrwlim/stable.hpp"

namespace ctrwlim {

enum class PathKind { step, polyline };

/// A path on [0, horizon].
///
/// In step mode the path is càdlàg and piecewise constant: `times()` are the jump
/// epochs (strictly increasing, in (0, horizon]) and `values()` the post-jump
/// levels; the value on [0, first jump) is `initial_value()`.
///
/// In polyline mode `times()` are interpolation nodes starting at 0 and ending at
/// the horizon, and the path is the linear interpolant of `values()`.
class StepPath {
 public:
  StepPath() = default;
  StepPath(std::vector<double> jump_times, std::vector<double> values, double horizon,
           double initial_value = 0.0);

  /// Builds a step path from jump sizes; jumps at equal epochs are merged by summation.
  static StepPath from_jumps(std::span<const double> jump_times, std::span<const double> sizes,
                             double horizon, double initial_value = 0.0);
  static StepPath polyline(std::vector<double> node_times, std::vector<double> node_values);

  PathKind kind() const noexcept { return kind_; }
  bool is_step() const noexcept { return kind_ == PathKind::step; }
  double horizon() const noexcept { return horizon_; }
  double initial_value() const noexcept { return initial_; }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }

  /// Value at t in [0, horizon].
  double operator()(double t) const;
  /// x(t-); equals x(t) away from jump epochs. x(0-) := x(0).
  double left_limit(double t) const;
  /// Jump sizes (step mode) or node increments (polyline mode).
  std::vector<double> increments() const;
  /// Restriction to [0, t].
  StepPath restricted(double t) const;

 private:
  PathKind kind_ = PathKind::step;
  std::vector<double> times_;
  std::vector<double> values_;
  double horizon_ = 0.0;
  double initial_ = 0.0;
};

/// r = 1/n and h = n^(-beta/alpha), so that h^alpha / r^beta = 1.
struct ScalingScheme {
  std::uint64_t n = 1;
  double alpha = 2.0;
  double beta = 1.0;

  double time_factor() const { return 1.0 / static_cast<double>(n); }
  double space_factor() const;
  void validate() const;
};

/// Waiting times J_i, epochs T_i = J_1 + ... + J_i and jumps Y_i of a renewal process.
struct RenewalSkeleton {
  std::vector<double> waiting_times;
  std::vector<double> epochs;
  std::vector<double> jumps;

  std::size_t size() const noexcept { return epochs.size(); }
  /// Time up to which N(t) is known exactly: the last epoch, or 0 if empty.
  double reach() const noexcept { return epochs.empty() ? 0.0 : epochs.back(); }
  void validate() const;
};

/// Builds a skeleton from explicit epochs and jumps (waiting times are recomputed).
RenewalSkeleton make_skeleton(std::span<const double> epochs, std::span<const double> jumps);

/// Symmetric alpha-stable jumps and Mittag-Leffler waiting times.
struct CtrwLaws {
  StableLaw jumps{2.0, 1.0, Skew::symmetric};
  MittagLefflerLaw waiting{1.0, 1.0};

  void validate() const;
};

/// Lazily extendable skeleton for one seeded stream. Waiting times and jumps come
/// from separate sub-streams, so the skeleton prefix never depends on how far it
/// was extended.
class SkeletonSource {
 public:
  SkeletonSource(const CtrwLaws& laws, SeedSpec seed);

  /// Extends the skeleton until its last epoch exceeds `time_horizon`.
  const RenewalSkeleton& cover(double time_horizon);
  const RenewalSkeleton& skeleton() const noexcept { return skeleton_; }

 private:
  CtrwLaws laws_;
  Engine waiting_engine_;
  Engine jump_engine_;
  RenewalSkeleton skeleton_;
};

RenewalSkeleton generate_skeleton(const CtrwLaws& laws, SeedSpec seed, double time_horizon);

/// N(t) = max{n : T_n <= t} on [0, horizon].
StepPath counting_path(const RenewalSkeleton& skeleton, double horizon);

/// X_{r,h}(t) = sum_{i <= N(t/r)} h Y_i on [0, horizon].
StepPath ctrw_path(const RenewalSkeleton& skeleton, const ScalingScheme& scheme, double horizon);

/// Beta-stable subordinator on the grid x_j = j*step, j*step <= horizon:
/// D(x_j) = sum of step^(1/beta) * S_i with S_i one-sided stable.
StepPath subordinator_path(double beta, double step, double horizon, SeedSpec seed);

/// inf{x >= 0 : D(x) > t} over the grid of a subordinator path: the first grid
/// coordinate where D exceeds t.
double inverse_subordinator(const StepPath& subordinator, double t);

/// Grid-sampled ingredients of the time-changed Lévy process L_alpha(D^{-1}(t)).
///
/// Grid cell j (j = 1..m) of operational time carries the subordinator value
/// clock[j-1] = D(j*step) and the Lévy increment levy_increments[j-1]. The
/// composed process jumps by the j-th Lévy increment at real time D(j*step).
/// With beta = 1 the clock is the identity, D(j*step) = j*step.
struct TimeChangedDriver {
  double alpha = 2.0;
  double beta = 1.0;
  double step = 0.0;
  double horizon = 0.0;
  std::vector<double> clock;
  std::vector<double> levy_increments;

  /// Same randomness on a grid `factor` times coarser: clocks are subsampled and
  /// increments summed in consecutive groups.
  TimeChangedDriver coarsened(std::size_t factor) const;
};

/// Samples a driver whose clock exceeds `horizon`. The number of grid cells is a
/// multiple of `block`, so coarsening by any divisor of `block` stays covered.
TimeChangedDriver make_driver(double alpha, double beta, double step, double horizon,
                              SeedSpec seed, std::size_t block = 1);

/// L_alpha(D^{-1}(t)) with L evaluated at the last grid point before the first
/// crossing, which starts the path at 0 and makes it a CTRW with stable waiting times.
StepPath time_changed_levy(const TimeChangedDriver& driver);
StepPath time_changed_levy(double alpha, double beta, double step, double horizon, SeedSpec seed);

/// h_delta(r) = (1 - delta/r)^+ ; K_delta(x)(t) = sum_{s <= t} h_delta(|dx_s|) dx_s.
double shrink_factor(double delta, double magnitude);
StepPath large_jump_part(const StepPath& path, double delta);
/// x - K_delta(x): every jump clipped to magnitude delta, sign preserved.
StepPath truncate_jumps(const StepPath& path, double delta);

/// Sum of absolute jumps on (0, t] (step paths) or of absolute increments of the
/// interpolant on [0, t] (polylines).
double total_variation(const StepPath& path, double t);

}  // namespace ctrwlim
