#include "ctrwlim/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

StepPath::StepPath(std::vector<double> jump_times, std::vector<double> values, double horizon,
                   double initial_value)
    : kind_(PathKind::step),
      times_(std::move(jump_times)),
      values_(std::move(values)),
      horizon_(horizon),
      initial_(initial_value) {
  detail::require(horizon_ > 0.0 && std::isfinite(horizon_), "StepPath: horizon must be positive");
  detail::require(times_.size() == values_.size(),
                  "StepPath: jump_times and values must have equal length");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    detail::require(times_[i] > 0.0 && times_[i] <= horizon_,
                    "StepPath: jump times must lie in (0, horizon]");
    detail::require(i == 0 || times_[i] > times_[i - 1],
                    "StepPath: jump times must be strictly increasing");
  }
}

StepPath StepPath::from_jumps(std::span<const double> jump_times, std::span<const double> sizes,
                              double horizon, double initial_value) {
  detail::require(jump_times.size() == sizes.size(),
                  "StepPath::from_jumps: times and sizes must have equal length");
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(jump_times.size());
  values.reserve(jump_times.size());
  double level = initial_value;
  for (std::size_t i = 0; i < jump_times.size(); ++i) {
    level += sizes[i];
    if (!times.empty() && jump_times[i] == times.back()) {
      values.back() = level;
    } else {
      detail::require(times.empty() || jump_times[i] > times.back(),
                      "StepPath::from_jumps: jump times must be non-decreasing");
      times.push_back(jump_times[i]);
      values.push_back(level);
    }
  }
  return StepPath(std::move(times), std::move(values), horizon, initial_value);
}

StepPath StepPath::polyline(std::vector<double> node_times, std::vector<double> node_values) {
  detail::require(node_times.size() >= 2 && node_times.size() == node_values.size(),
                  "StepPath::polyline: need at least two nodes with matching values");
  detail::require(node_times.front() == 0.0, "StepPath::polyline: first node must be at t = 0");
  for (std::size_t i = 1; i < node_times.size(); ++i) {
    detail::require(node_times[i] > node_times[i - 1],
                    "StepPath::polyline: node times must be strictly increasing");
  }
  StepPath p;
  p.kind_ = PathKind::polyline;
  p.horizon_ = node_times.back();
  p.initial_ = node_values.front();
  p.times_ = std::move(node_times);
  p.values_ = std::move(node_values);
  return p;
}

namespace {
void check_time(const StepPath& p, double t) {
  if (!(t >= 0.0 && t <= p.horizon())) {
    throw RangeError("path evaluated at t = " + std::to_string(t) + " outside [0, " +
                     std::to_string(p.horizon()) + "]");
  }
}
}  // namespace

double StepPath::operator()(double t) const {
  check_time(*this, t);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto idx = static_cast<std::size_t>(it - times_.begin());
  if (kind_ == PathKind::step) return idx == 0 ? initial_ : values_[idx - 1];
  if (idx >= times_.size()) return values_.back();
  const double w = (t - times_[idx - 1]) / (times_[idx] - times_[idx - 1]);
  return values_[idx - 1] + w * (values_[idx] - values_[idx - 1]);
}

double StepPath::left_limit(double t) const {
  check_time(*this, t);
  if (kind_ == PathKind::polyline) return (*this)(t);
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto idx = static_cast<std::size_t>(it - times_.begin());
  return idx == 0 ? initial_ : values_[idx - 1];
}

std::vector<double> StepPath::increments() const {
  std::vector<double> out;
  if (kind_ == PathKind::step) {
    out.reserve(values_.size());
    double prev = initial_;
    for (double v : values_) {
      out.push_back(v - prev);
      prev = v;
    }
  } else {
    for (std::size_t i = 1; i < values_.size(); ++i) out.push_back(values_[i] - values_[i - 1]);
  }
  return out;
}

StepPath StepPath::restricted(double t) const {
  detail::require(t > 0.0 && t <= horizon_, "StepPath::restricted: t must lie in (0, horizon]");
  const auto end = std::upper_bound(times_.begin(), times_.end(), t);
  const auto count = static_cast<std::size_t>(end - times_.begin());
  if (kind_ == PathKind::step) {
    return StepPath(std::vector<double>(times_.begin(), end),
                    std::vector<double>(values_.begin(), values_.begin() + count), t, initial_);
  }
  std::vector<double> nt(times_.begin(), end);
  std::vector<double> nv(values_.begin(), values_.begin() + count);
  if (nt.back() < t) {
    nv.push_back((*this)(t));
    nt.push_back(t);
  }
  return polyline(std::move(nt), std::move(nv));
}

double ScalingScheme::space_factor() const {
  return std::pow(static_cast<double>(n), -beta / alpha);
}

void ScalingScheme::validate() const {
  detail::require(n >= 1, "ScalingScheme: n must be a positive integer");
  detail::require(alpha > 0.0 && alpha <= 2.0, "ScalingScheme: alpha must lie in (0, 2]");
  detail::require(beta > 0.0 && beta <= 1.0, "ScalingScheme: beta must lie in (0, 1]");
  const double ratio = std::pow(space_factor(), alpha) / std::pow(time_factor(), beta);
  detail::require(std::abs(ratio - 1.0) <= 1e-12,
                  "ScalingScheme: h^alpha / r^beta deviates from 1 beyond 1e-12");
}

void RenewalSkeleton::validate() const {
  detail::require(epochs.size() == jumps.size() && epochs.size() == waiting_times.size(),
                  "RenewalSkeleton: waiting times, epochs and jumps must have equal length");
  double prev = 0.0;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    detail::require(waiting_times[i] >= 0.0, "RenewalSkeleton: waiting times must be non-negative");
    detail::require(epochs[i] >= prev, "RenewalSkeleton: epochs must be non-decreasing");
    prev = epochs[i];
  }
}

RenewalSkeleton make_skeleton(std::span<const double> epochs, std::span<const double> jumps) {
  RenewalSkeleton s;
  s.epochs.assign(epochs.begin(), epochs.end());
  s.jumps.assign(jumps.begin(), jumps.end());
  s.waiting_times.resize(epochs.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    s.waiting_times[i] = epochs[i] - prev;
    prev = epochs[i];
  }
  s.validate();
  return s;
}

void CtrwLaws::validate() const {
  jumps.validate();
  detail::require(jumps.skew == Skew::symmetric, "CtrwLaws: jump law must be symmetric");
  waiting.validate();
}

SkeletonSource::SkeletonSource(const CtrwLaws& laws, SeedSpec seed)
    : laws_(laws),
      waiting_engine_(seed, Substream::waiting),
      jump_engine_(seed, Substream::jumps) {
  laws_.validate();
}

const RenewalSkeleton& SkeletonSource::cover(double time_horizon) {
  detail::require(std::isfinite(time_horizon), "SkeletonSource::cover: horizon must be finite");
  while (skeleton_.reach() <= time_horizon) {
    const double j = laws_.waiting.scale * draw_mittag_leffler(laws_.waiting.beta, waiting_engine_);
    const double y = laws_.jumps.scale * draw_symmetric_stable(laws_.jumps.alpha, jump_engine_);
    skeleton_.waiting_times.push_back(j);
    skeleton_.epochs.push_back(skeleton_.reach() + j);
    skeleton_.jumps.push_back(y);
  }
  return skeleton_;
}

RenewalSkeleton generate_skeleton(const CtrwLaws& laws, SeedSpec seed, double time_horizon) {
  SkeletonSource source(laws, seed);
  return source.cover(time_horizon);
}

namespace {
void require_coverage(const RenewalSkeleton& s, double time_horizon) {
  if (!(s.reach() > time_horizon)) {
    throw CoverageError("renewal skeleton reaches t = " + std::to_string(s.reach()) +
                        " but must exceed " + std::to_string(time_horizon));
  }
}
}  // namespace

StepPath counting_path(const RenewalSkeleton& skeleton, double horizon) {
  detail::require(horizon > 0.0, "counting_path: horizon must be positive");
  require_coverage(skeleton, horizon);
  std::vector<double> times;
  std::vector<double> ones;
  for (double t : skeleton.epochs) {
    if (t > horizon) break;
    times.push_back(t);
    ones.push_back(1.0);
  }
  return StepPath::from_jumps(times, ones, horizon);
}

StepPath ctrw_path(const RenewalSkeleton& skeleton, const ScalingScheme& scheme, double horizon) {
  scheme.validate();
  detail::require(horizon > 0.0, "ctrw_path: horizon must be positive");
  const double n = static_cast<double>(scheme.n);
  const double operational = n * horizon;
  require_coverage(skeleton, operational);
  const double h = scheme.space_factor();
  std::vector<double> times;
  std::vector<double> sizes;
  for (std::size_t i = 0; i < skeleton.size() && skeleton.epochs[i] <= operational; ++i) {
    times.push_back(std::min(skeleton.epochs[i] / n, horizon));
    sizes.push_back(h * skeleton.jumps[i]);
  }
  return StepPath::from_jumps(times, sizes, horizon);
}

namespace {

void check_driver_args(double alpha, double beta, double step, double horizon) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
  detail::require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  detail::require(step > 0.0 && std::isfinite(step), "grid step must be positive");
  detail::require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
}

// Subordinator values D(j*step) for j = 1..cells.
class SubordinatorClock {
 public:
  SubordinatorClock(double beta, double step, SeedSpec seed)
      : beta_(beta), step_(step), scale_(std::pow(step, 1.0 / beta)),
        engine_(seed, Substream::subordinator) {}

  double next() {
    ++count_;
    if (beta_ == 1.0) return step_ * static_cast<double>(count_);
    value_ += scale_ * draw_positive_stable(beta_, engine_);
    return value_;
  }

 private:
  double beta_;
  double step_;
  double scale_;
  Engine engine_;
  double value_ = 0.0;
  std::uint64_t count_ = 0;
};

}  // namespace

StepPath subordinator_path(double beta, double step, double horizon, SeedSpec seed) {
  check_driver_args(1.0, beta, step, horizon);
  detail::require(beta < 1.0, "subordinator_path: beta must lie in (0, 1)");
  const auto cells = static_cast<std::size_t>(std::floor(horizon / step * (1.0 + 1e-12)));
  detail::require(cells >= 1, "subordinator_path: horizon must be at least one grid step");
  SubordinatorClock clock(beta, step, seed);
  std::vector<double> times(cells);
  std::vector<double> values(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    times[j] = std::min(step * static_cast<double>(j + 1), horizon);
    values[j] = clock.next();
  }
  return StepPath(std::move(times), std::move(values), horizon);
}

double inverse_subordinator(const StepPath& subordinator, double t) {
  detail::require(t >= 0.0, "inverse_subordinator: t must be non-negative");
  detail::require(subordinator.is_step(), "inverse_subordinator: subordinator must be a step path");
  const auto values = subordinator.values();
  if (values.empty() || !(values.back() > t)) {
    throw RangeError("inverse_subordinator: subordinator does not exceed t = " + std::to_string(t) +
                     " on its grid; extend the path");
  }
  const auto it = std::upper_bound(values.begin(), values.end(), t);
  return subordinator.times()[static_cast<std::size_t>(it - values.begin())];
}

TimeChangedDriver make_driver(double alpha, double beta, double step, double horizon,
                              SeedSpec seed, std::size_t block) {
  check_driver_args(alpha, beta, step, horizon);
  detail::require(block >= 1, "make_driver: block must be at least 1");
  TimeChangedDriver d;
  d.alpha = alpha;
  d.beta = beta;
  d.step = step;
  d.horizon = horizon;
  SubordinatorClock clock(beta, step, seed);
  while (d.clock.empty() || d.clock.back() <= horizon || d.clock.size() % block != 0) {
    d.clock.push_back(clock.next());
  }
  Engine levy(seed, Substream::levy);
  const double scale = std::pow(step, 1.0 / alpha);
  d.levy_increments.resize(d.clock.size());
  for (auto& x : d.levy_increments) x = scale * draw_symmetric_stable(alpha, levy);
  return d;
}

TimeChangedDriver TimeChangedDriver::coarsened(std::size_t factor) const {
  detail::require(factor >= 1, "TimeChangedDriver::coarsened: factor must be at least 1");
  TimeChangedDriver d;
  d.alpha = alpha;
  d.beta = beta;
  d.step = step * static_cast<double>(factor);
  d.horizon = horizon;
  const std::size_t cells = clock.size() / factor;
  d.clock.resize(cells);
  d.levy_increments.assign(cells, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    d.clock[i] = clock[(i + 1) * factor - 1];
    for (std::size_t j = i * factor; j < (i + 1) * factor; ++j) {
      d.levy_increments[i] += levy_increments[j];
    }
  }
  if (d.clock.empty() || !(d.clock.back() > horizon)) {
    throw CoverageError("TimeChangedDriver::coarsened: coarse clock does not cover the horizon");
  }
  return d;
}

StepPath time_changed_levy(const TimeChangedDriver& driver) {
  std::vector<double> times;
  std::vector<double> sizes;
  for (std::size_t j = 0; j < driver.clock.size() && driver.clock[j] <= driver.horizon; ++j) {
    times.push_back(driver.clock[j]);
    sizes.push_back(driver.levy_increments[j]);
  }
  return StepPath::from_jumps(times, sizes, driver.horizon);
}

StepPath time_changed_levy(double alpha, double beta, double step, double horizon,
                           SeedSpec seed) {
  return time_changed_levy(make_driver(alpha, beta, step, horizon, seed));
}

double shrink_factor(double delta, double magnitude) {
  return magnitude > delta ? 1.0 - delta / magnitude : 0.0;
}

namespace {
template <class JumpMap>
StepPath map_jumps(const StepPath& path, double initial, JumpMap map) {
  const auto jumps = path.increments();
  std::vector<double> values(jumps.size());
  double level = initial;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    level += map(jumps[i]);
    values[i] = level;
  }
  return StepPath(std::vector<double>(path.times().begin(), path.times().end()), std::move(values),
                  path.horizon(), initial);
}
}  // namespace

StepPath large_jump_part(const StepPath& path, double delta) {
  detail::require(delta > 0.0, "large_jump_part: delta must be positive");
  if (!path.is_step()) {
    std::vector<double> t(path.times().begin(), path.times().end());
    return StepPath::polyline(std::move(t), std::vector<double>(t.size(), 0.0));
  }
  return map_jumps(path, 0.0,
                   [delta](double j) { return shrink_factor(delta, std::abs(j)) * j; });
}

StepPath truncate_jumps(const StepPath& path, double delta) {
  detail::require(delta > 0.0, "truncate_jumps: delta must be positive");
  if (!path.is_step()) return path;
  return map_jumps(path, path.initial_value(), [delta](double j) {
    return std::abs(j) > delta ? std::copysign(delta, j) : j;
  });
}

double total_variation(const StepPath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon())) {
    throw RangeError("total_variation: t outside [0, horizon]");
  }
  const auto times = path.times();
  const auto values = path.values();
  double tv = 0.0;
  if (path.is_step()) {
    double prev = path.initial_value();
    for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) {
      tv += std::abs(values[i] - prev);
      prev = values[i];
    }
    return tv;
  }
  for (std::size_t i = 1; i < times.size() && times[i - 1] < t; ++i) {
    const double end = times[i] <= t ? values[i] : path(t);
    tv += std::abs(end - values[i - 1]);
  }
  return tv;
}

}  // namespace ctrwlim
