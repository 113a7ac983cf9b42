#pragma once

#include <span>
#include <vector>

#include "ctrwlim/paths.hpp"

namespace ctrwlim {

/// Parametric representation (r(s), u(s)), s in [0, 1], of a completed graph:
/// piecewise linear through the listed nodes.
struct ParamRep {
  std::vector<double> s;
  std::vector<double> r;
  std::vector<double> u;

  std::size_t size() const noexcept { return s.size(); }
  /// u at the last node with r <= t, interpolated along r; recovers x(t) at
  /// continuity points of x.
  double value_at_time(double t) const;
};

/// Strictly increasing continuous piecewise-linear bijection of [0, T].
struct TimeChange {
  std::vector<double> from;
  std::vector<double> to;

  double operator()(double t) const;
  void validate() const;
};

/// Canonical parametric representation of the completed graph: nodes visited in
/// graph order, jumps as vertical segments, parameter proportional to arc length
/// (|dr| + |du|), zero-length segments dropped.
ParamRep completed_graph(const StepPath& path);

/// 0 if v2 lies between v1 and v3, else min(|v1 - v2|, |v3 - v2|).
double segment_distance(double v2, double v1, double v3);

/// sup_t |x(t) - y(t)| (exact for step paths and polylines).
double uniform_distance(const StepPath& x, const StepPath& y);

/// Skorokhod J1 distance, returned as a certified upper bound no more than `tol`
/// above the exact value. Step paths: bisection on epsilon with an exact
/// feasibility test over the images of the jump epochs. Continuous polylines:
/// equals the M1 distance. Mixing a step path and a polyline is rejected.
double j1_distance(const StepPath& x, const StepPath& y, double tol = 1e-9);

/// Skorokhod M1 distance: the Fréchet distance (max-norm) between the completed
/// graphs, as a certified upper bound within `tol` of the exact value.
double m1_distance(const StepPath& x, const StepPath& y, double tol = 1e-9);

/// Probe set used when none is given: all jump epochs (or nodes) of x plus 256
/// uniform points of [0, T].
std::vector<double> default_probes(const StepPath& x);

/// sup over probes t of sup_{(t-delta)v0 <= t1 < t2 < t3 <= (t+delta)^T}
/// segment_distance(x(t2), x(t1), x(t3)); exact for each window.
double m1_modulus(const StepPath& x, double delta, std::span<const double> probes);
double m1_modulus(const StepPath& x, double delta);

struct InfiniteM1 {
  double value = 0.0;
  /// Tail bound e^{-H} for the part of the integral beyond the horizon.
  double tail_bound = 0.0;
};

/// int_0^H e^{-t} (d_{M1,t}(x, y) ^ 1) dt on cells of width `step`, each cell
/// weighted exactly and evaluated at its left end (the right limit |x(0)-y(0)| for
/// the first). Both paths must share the horizon H.
InfiniteM1 m1_distance_infinite(const StepPath& x, const StepPath& y, double step = 0.05,
                                double tol = 1e-6);

}  // namespace ctrwlim
