#include "ctrwlim/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

double ParamRep::value_at_time(double t) const {
  detail::require(!r.empty(), "ParamRep: empty representation");
  const auto it = std::upper_bound(r.begin(), r.end(), t);
  if (it == r.begin()) throw RangeError("ParamRep::value_at_time: t before the graph start");
  const auto i = static_cast<std::size_t>(it - r.begin()) - 1;
  if (i + 1 == r.size()) return u.back();
  const double w = (t - r[i]) / (r[i + 1] - r[i]);
  return u[i] + w * (u[i + 1] - u[i]);
}

double TimeChange::operator()(double t) const {
  const auto it = std::upper_bound(from.begin(), from.end(), t);
  if (it == from.begin() || (it == from.end() && t > from.back())) {
    throw RangeError("TimeChange: argument outside [0, T]");
  }
  const auto i = static_cast<std::size_t>(it - from.begin()) - 1;
  if (i + 1 == from.size()) return to.back();
  const double w = (t - from[i]) / (from[i + 1] - from[i]);
  return to[i] + w * (to[i + 1] - to[i]);
}

void TimeChange::validate() const {
  detail::require(from.size() >= 2 && from.size() == to.size(),
                  "TimeChange: need at least two matching breakpoints");
  detail::require(from.front() == 0.0 && to.front() == 0.0 && from.back() == to.back(),
                  "TimeChange: must fix 0 and T");
  for (std::size_t i = 1; i < from.size(); ++i) {
    detail::require(from[i] > from[i - 1] && to[i] > to[i - 1],
                    "TimeChange: breakpoints must be strictly increasing");
  }
}

namespace {

struct Pt {
  double t;
  double v;
};

std::vector<Pt> graph_vertices(const StepPath& x) {
  std::vector<Pt> g;
  const auto times = x.times();
  const auto values = x.values();
  auto push = [&g](Pt p) {
    if (g.empty() || g.back().t != p.t || g.back().v != p.v) g.push_back(p);
  };
  if (!x.is_step()) {
    for (std::size_t i = 0; i < times.size(); ++i) push({times[i], values[i]});
    return g;
  }
  double level = x.initial_value();
  push({0.0, level});
  for (std::size_t i = 0; i < times.size(); ++i) {
    push({times[i], level});
    level = values[i];
    push({times[i], level});
  }
  push({x.horizon(), level});
  return g;
}

void require_common_horizon(const StepPath& x, const StepPath& y, const char* who) {
  detail::require(std::abs(x.horizon() - y.horizon()) <= 1e-12 * std::max(1.0, x.horizon()),
                  std::string(who) + ": paths must share the same horizon");
}

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};

bool close(Pt a, Pt b, double eps) {
  return std::abs(a.t - b.t) <= eps && std::abs(a.v - b.v) <= eps;
}

// {u in [0,1] : |a + u (b - a) - c|_inf <= eps}, convex.
Interval free_interval(Pt a, Pt b, Pt c, double eps) {
  Interval iv{0.0, 1.0};
  auto clip = [&](double a0, double b0, double c0) {
    const double d = b0 - a0;
    if (d == 0.0) {
      if (std::abs(a0 - c0) > eps) iv = Interval{};
      return;
    }
    double u1 = (c0 - eps - a0) / d;
    double u2 = (c0 + eps - a0) / d;
    if (u1 > u2) std::swap(u1, u2);
    iv.lo = std::max(iv.lo, u1);
    iv.hi = std::min(iv.hi, u2);
  };
  clip(a.t, b.t, c.t);
  if (!iv.empty()) clip(a.v, b.v, c.v);
  // Endpoint membership decided directly, so adjacent edges agree on shared vertices.
  const bool a_in = close(a, c, eps);
  const bool b_in = close(b, c, eps);
  if (a_in) iv.lo = 0.0, iv.hi = std::max(iv.hi, 0.0);
  if (b_in) iv.hi = 1.0, iv.lo = std::min(iv.lo, 1.0);
  if (!a_in && iv.lo <= 0.0) iv.lo = std::nextafter(0.0, 1.0);
  if (!b_in && iv.hi >= 1.0) iv.hi = std::nextafter(1.0, 0.0);
  return iv;
}

Interval from_lo(Interval iv, double lo) {
  iv.lo = std::max(iv.lo, lo);
  return iv;
}

// Alt–Godau decision procedure for the Fréchet distance under the max norm.
bool frechet_within(const std::vector<Pt>& P, const std::vector<Pt>& Q, double eps) {
  if (!close(P.front(), Q.front(), eps) || !close(P.back(), Q.back(), eps)) return false;
  const std::size_t p = P.size() - 1;
  const std::size_t q = Q.size() - 1;
  if (p == 0 || q == 0) {
    // A single point against a polyline: every vertex must be within eps.
    const auto& one = p == 0 ? P.front() : Q.front();
    const auto& many = p == 0 ? Q : P;
    return std::all_of(many.begin(), many.end(), [&](Pt v) { return close(one, v, eps); });
  }
  // reach_left[j]: reachable part of the vertical edge (s = i, t in [j, j+1]).
  std::vector<Interval> reach_left(q);
  {
    bool open = true;
    for (std::size_t j = 0; j < q; ++j) {
      const Interval f = free_interval(Q[j], Q[j + 1], P[0], eps);
      if (open && !f.empty() && f.lo == 0.0) {
        reach_left[j] = f;
        open = f.hi == 1.0;
      } else {
        open = false;
      }
    }
  }
  bool bottom_open = true;
  std::vector<Interval> next_left(q);
  Interval last_top;
  for (std::size_t i = 0; i < p; ++i) {
    // Bottom edge of cell (i, 0), reachable only along t = 0.
    Interval bottom;
    {
      const Interval f = free_interval(P[i], P[i + 1], Q[0], eps);
      if (bottom_open && !f.empty() && f.lo == 0.0) {
        bottom = f;
        bottom_open = f.hi == 1.0;
      } else {
        bottom_open = false;
      }
    }
    for (std::size_t j = 0; j < q; ++j) {
      const Interval& left = reach_left[j];
      const Interval right_free = free_interval(Q[j], Q[j + 1], P[i + 1], eps);
      const Interval top_free = free_interval(P[i], P[i + 1], Q[j + 1], eps);
      Interval right;
      Interval top;
      if (!bottom.empty()) {
        right = right_free;
      } else if (!left.empty()) {
        right = from_lo(right_free, left.lo);
      }
      if (!left.empty()) {
        top = top_free;
      } else if (!bottom.empty()) {
        top = from_lo(top_free, bottom.lo);
      }
      next_left[j] = right;
      bottom = top;
    }
    last_top = bottom;
    std::swap(reach_left, next_left);
  }
  const Interval& last_right = reach_left[q - 1];
  return (!last_right.empty() && last_right.hi == 1.0) || (!last_top.empty() && last_top.hi == 1.0);
}

// Level intervals of a step path: level k holds on [start[k], start[k+1]).
struct Levels {
  std::vector<double> value;
  std::vector<double> start;  // start[0] = 0, then the jump epochs, then T
};

Levels levels_of(const StepPath& x) {
  Levels l;
  l.value.push_back(x.initial_value());
  l.start.push_back(0.0);
  const auto times = x.times();
  const auto values = x.values();
  for (std::size_t i = 0; i < times.size(); ++i) {
    l.value.push_back(values[i]);
    l.start.push_back(times[i]);
  }
  l.start.push_back(x.horizon());
  return l;
}

// Interval with optionally open ends.
struct Span {
  double lo;
  double hi;
  bool lo_open = false;
  bool hi_open = false;

  bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
};

Span intersect(const Span& a, const Span& b) {
  Span r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  r.lo_open = (a.lo == r.lo && a.lo_open) || (b.lo == r.lo && b.lo_open);
  r.hi_open = (a.hi == r.hi && a.hi_open) || (b.hi == r.hi && b.hi_open);
  return r;
}

// Is there a strictly increasing relabelling c_1 < ... < c_p of x's jump epochs,
// |c_k - a_k| <= eps, such that x's k-th level, placed on [c_k, c_{k+1}), stays
// within eps of y? Level k must then fit in one run [L, R) of consecutive y levels
// within eps of it, so the feasible sets for c_k are finite unions of intervals.
bool j1_within(const Levels& x, const Levels& y, double eps) {
  const double T = x.start.back();
  const std::size_t levels = x.value.size();
  const std::size_t ylev = y.value.size();
  std::vector<Span> current{{0.0, 0.0}};
  std::vector<Span> next;
  for (std::size_t k = 0; k < levels; ++k) {
    const bool last = k + 1 == levels;
    Span window{T, T};
    if (!last) {
      const double a = x.start[k + 1];
      if (a < T) window = {std::max(0.0, a - eps), std::min(T, a + eps), a - eps <= 0.0, false};
    }
    next.clear();
    const double v = x.value[k];
    std::size_t s = 0;
    for (std::size_t j = 0; j < ylev;) {
      if (std::abs(y.value[j] - v) > eps) {
        ++j;
        continue;
      }
      std::size_t e = j;
      while (e + 1 < ylev && std::abs(y.value[e + 1] - v) <= eps) ++e;
      const bool reaches_end = e + 1 == ylev;
      const Span run{y.start[j], y.start[e + 1], false, !reaches_end};
      j = e + 1;
      if (last && !reaches_end) continue;  // the final level must cover T
      while (s < current.size() && current[s].hi < run.lo) ++s;
      // Smallest admissible start of level k inside this run.
      Span first{1.0, 0.0};
      for (std::size_t i = s; i < current.size() && current[i].lo <= run.hi; ++i) {
        first = intersect(current[i], run);
        if (!first.empty()) break;
      }
      if (first.empty()) continue;
      if (last) return true;
      // c_{k+1} in (c_k, R], inside the window.
      const Span out = intersect(Span{first.lo, run.hi, true, false}, window);
      if (out.empty()) continue;
      if (!next.empty() && (out.lo < next.back().hi ||
                            (out.lo == next.back().hi && !(out.lo_open && next.back().hi_open)))) {
        if (out.hi > next.back().hi || (out.hi == next.back().hi && !out.hi_open)) {
          next.back().hi = out.hi;
          next.back().hi_open = out.hi_open;
        }
      } else {
        next.push_back(out);
      }
    }
    if (next.empty()) return false;
    std::swap(current, next);
  }
  return false;
}

double endpoint_gap(const StepPath& x, const StepPath& y) {
  return std::max(std::abs(x(0.0) - y(0.0)), std::abs(x(x.horizon()) - y(y.horizon())));
}

template <class Feasible>
double bisect(double lo, double hi, double tol, Feasible feasible) {
  detail::require(tol > 0.0, "distance tolerance must be positive");
  if (hi <= lo) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

ParamRep completed_graph(const StepPath& path) {
  const auto g = graph_vertices(path);
  ParamRep rep;
  rep.s.reserve(g.size());
  double length = 0.0;
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < g.size(); ++i) {
    length += std::abs(g[i].t - g[i - 1].t) + std::abs(g[i].v - g[i - 1].v);
    cum.push_back(length);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    rep.s.push_back(i + 1 == g.size() ? 1.0 : cum[i] / length);
    rep.r.push_back(g[i].t);
    rep.u.push_back(g[i].v);
  }
  return rep;
}

double segment_distance(double v2, double v1, double v3) {
  const double lo = std::min(v1, v3);
  const double hi = std::max(v1, v3);
  if (v2 >= lo && v2 <= hi) return 0.0;
  return std::min(std::abs(v1 - v2), std::abs(v3 - v2));
}

double uniform_distance(const StepPath& x, const StepPath& y) {
  require_common_horizon(x, y, "uniform_distance");
  const double T = std::min(x.horizon(), y.horizon());
  std::vector<double> b{0.0, T};
  for (double t : x.times()) b.push_back(std::min(t, T));
  for (double t : y.times()) b.push_back(std::min(t, T));
  double d = 0.0;
  for (double t : b) {
    d = std::max({d, std::abs(x(t) - y(t)), std::abs(x.left_limit(t) - y.left_limit(t))});
  }
  return d;
}

double j1_distance(const StepPath& x, const StepPath& y, double tol) {
  require_common_horizon(x, y, "j1_distance");
  detail::require(x.kind() == y.kind(),
                  "j1_distance: both paths must be step paths or both continuous polylines");
  if (!x.is_step()) return m1_distance(x, y, tol);
  const Levels lx = levels_of(x);
  const Levels ly = levels_of(y);
  return bisect(endpoint_gap(x, y), uniform_distance(x, y), tol,
                [&](double eps) { return j1_within(lx, ly, eps); });
}

double m1_distance(const StepPath& x, const StepPath& y, double tol) {
  require_common_horizon(x, y, "m1_distance");
  const auto P = graph_vertices(x);
  const auto Q = graph_vertices(y);
  return bisect(endpoint_gap(x, y), uniform_distance(x, y), tol,
                [&](double eps) { return frechet_within(P, Q, eps); });
}

std::vector<double> default_probes(const StepPath& x) {
  std::vector<double> a(x.times().begin(), x.times().end());
  constexpr int grid = 256;
  for (int i = 0; i < grid; ++i) {
    a.push_back(i + 1 == grid ? x.horizon() : x.horizon() * i / (grid - 1));
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

double m1_modulus(const StepPath& x, double delta, std::span<const double> probes) {
  detail::require(delta > 0.0, "m1_modulus: delta must be positive");
  const double T = x.horizon();
  const auto times = x.times();
  const auto values = x.values();
  std::vector<double> v;
  std::vector<double> suffix_min;
  std::vector<double> suffix_max;
  double w = 0.0;
  for (double t : probes) {
    detail::require(t >= 0.0 && t <= T, "m1_modulus: probe outside [0, T]");
    const double lo = std::max(0.0, t - delta);
    const double hi = std::min(T, t + delta);
    v.clear();
    v.push_back(x(lo));
    auto first = std::upper_bound(times.begin(), times.end(), lo);
    auto last = std::upper_bound(times.begin(), times.end(), hi);
    for (auto it = first; it != last; ++it) {
      v.push_back(values[static_cast<std::size_t>(it - times.begin())]);
    }
    if (!x.is_step()) v.push_back(x(hi));
    const std::size_t m = v.size();
    if (m < 3) continue;
    suffix_min.assign(m, 0.0);
    suffix_max.assign(m, 0.0);
    suffix_min[m - 1] = suffix_max[m - 1] = v[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) {
      suffix_min[k] = std::min(suffix_min[k + 1], v[k]);
      suffix_max[k] = std::max(suffix_max[k + 1], v[k]);
    }
    double pmin = v[0];
    double pmax = v[0];
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double above = std::min(v[j] - pmin, v[j] - suffix_min[j + 1]);
      const double below = std::min(pmax - v[j], suffix_max[j + 1] - v[j]);
      w = std::max({w, above, below});
      pmin = std::min(pmin, v[j]);
      pmax = std::max(pmax, v[j]);
    }
  }
  return w;
}

double m1_modulus(const StepPath& x, double delta) {
  const auto probes = default_probes(x);
  return m1_modulus(x, delta, probes);
}

InfiniteM1 m1_distance_infinite(const StepPath& x, const StepPath& y, double step, double tol) {
  require_common_horizon(x, y, "m1_distance_infinite");
  detail::require(step > 0.0, "m1_distance_infinite: quadrature step must be positive");
  const double H = x.horizon();
  InfiniteM1 out;
  out.tail_bound = std::exp(-H);
  const auto cells = static_cast<std::size_t>(std::ceil(H / step));
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = step * static_cast<double>(k);
    if (a >= H) break;
    const double b = std::min(H, a + step);
    const double weight = std::exp(-a) - std::exp(-b);
    double d = 0.0;
    if (k == 0) {
      d = std::abs(x(0.0) - y(0.0));
    } else {
      d = m1_distance(x.restricted(a), y.restricted(a), tol);
    }
    out.value += weight * std::min(d, 1.0);
  }
  return out;
}

}  // namespace ctrwlim
