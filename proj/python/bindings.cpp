// Python bindings: thin wrappers over the C++ library, arrays as numpy.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctrwlim/diagnostics.hpp"
#include "ctrwlim/errors.hpp"
#include "ctrwlim/integrals.hpp"
#include "ctrwlim/io.hpp"
#include "ctrwlim/paths.hpp"
#include "ctrwlim/skorokhod.hpp"
#include "ctrwlim/special.hpp"
#include "ctrwlim/stable.hpp"

namespace py = pybind11;
using namespace ctrwlim;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

CtrwLaws laws_for(double alpha, double beta) {
  CtrwLaws l{StableLaw{alpha, 1.0, Skew::symmetric}, MittagLefflerLaw{beta, 1.0}};
  l.validate();
  return l;
}

RenewalSkeleton skeleton_for(double alpha, double beta, std::uint64_t n, double horizon, std::uint64_t seed,
                             std::uint64_t stream) {
  return generate_skeleton(laws_for(alpha, beta), {seed, stream}, static_cast<double>(n) * horizon);
}

}  // namespace

PYBIND11_MODULE(_ctrwlim, m) {
  m.doc() = "Scaling limits of CTRW stochastic integrals: simulation and Skorokhod-space diagnostics";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<CoverageError>(m, "CoverageError", PyExc_RuntimeError);

  py::class_<StepPath>(m, "StepPath")
      .def_static("from_jumps",
                  [](std::vector<double> t, std::vector<double> s, double horizon, double initial) {
                    return StepPath::from_jumps(t, s, horizon, initial);
                  },
                  py::arg("times"), py::arg("sizes"), py::arg("horizon"), py::arg("initial") = 0.0)
      .def_static("polyline", &StepPath::polyline, py::arg("times"), py::arg("values"))
      .def_property_readonly("horizon", &StepPath::horizon)
      .def_property_readonly("initial_value", &StepPath::initial_value)
      .def_property_readonly("is_step", &StepPath::is_step)
      .def_property_readonly("times", [](const StepPath& p) { return to_array(p.times()); })
      .def_property_readonly("values", [](const StepPath& p) { return to_array(p.values()); })
      .def("increments", [](const StepPath& p) { return to_array(p.increments()); })
      .def("__call__", &StepPath::operator(), py::arg("t"))
      .def("left_limit", &StepPath::left_limit, py::arg("t"))
      .def("restricted", &StepPath::restricted, py::arg("t"))
      .def("__len__", &StepPath::size)
      .def("__repr__", [](const StepPath& p) {
        return "<StepPath " + std::string(p.is_step() ? "step" : "polyline") + " nodes=" +
               std::to_string(p.size()) + " horizon=" + format_real(p.horizon()) + ">";
      });

  // stable sampling
  m.def("sample_symmetric_stable",
        [](double alpha, std::size_t count, std::uint64_t seed, std::uint64_t stream, double scale) {
          const StableLaw law{alpha, scale, Skew::symmetric};
          law.validate();
          return to_array(sample_symmetric_stable(law, {seed, stream}, count));
        },
        py::arg("alpha"), py::arg("count"), py::arg("seed") = 0, py::arg("stream") = 0, py::arg("scale") = 1.0);
  m.def("sample_subordinator_increment",
        [](double alpha, std::size_t count, std::uint64_t seed, std::uint64_t stream, double scale) {
          const StableLaw law{alpha, scale, Skew::positive};
          law.validate();
          return to_array(sample_subordinator_increment(law, {seed, stream}, count));
        },
        py::arg("alpha"), py::arg("count"), py::arg("seed") = 0, py::arg("stream") = 0, py::arg("scale") = 1.0);
  m.def("sample_ml_waiting_time",
        [](double beta, std::size_t count, std::uint64_t seed, std::uint64_t stream, double scale) {
          const MittagLefflerLaw law{beta, scale};
          law.validate();
          return to_array(sample_ml_waiting_time(law, {seed, stream}, count));
        },
        py::arg("beta"), py::arg("count"), py::arg("seed") = 0, py::arg("stream") = 0, py::arg("scale") = 1.0);

  // special functions
  m.def("ml_eval", [](double beta, double z) { return ml_eval(beta, z); }, py::arg("beta"), py::arg("z"));
  m.def("ml_derivative", [](double beta, int n, double z) { return ml_derivative(beta, n, z); }, py::arg("beta"),
        py::arg("n"), py::arg("z"));
  m.def("frac_poisson_pmf", [](double beta, double t, int n) { return frac_poisson_pmf(beta, t, n); },
        py::arg("beta"), py::arg("t"), py::arg("n"));
  m.def("frac_poisson_mean", [](double beta, double t) { return frac_poisson_mean(beta, t); }, py::arg("beta"),
        py::arg("t"));
  m.def("limit_density",
        [](double alpha, double beta, double t, double x_max, std::size_t points) {
          const DensityGrid g = limit_density(alpha, beta, t, {x_max, points});
          py::dict d;
          d["x"] = to_array(g.x_values);
          d["density"] = to_array(g.density_values);
          d["cdf"] = to_array(g.cdf_values);
          d["mass"] = g.mass;
          d["origin_excluded"] = g.origin_excluded;
          return d;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("t") = 1.0, py::arg("x_max") = 10.0, py::arg("points") = 801);
  m.def("limit_density_at", &limit_density_at, py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("x"));

  // paths
  m.def("simulate_ctrw",
        [](double alpha, double beta, std::uint64_t n, double horizon, std::uint64_t seed, std::uint64_t stream) {
          const ScalingScheme s{n, alpha, beta};
          s.validate();
          return ctrw_path(skeleton_for(alpha, beta, n, horizon, seed, stream), s, horizon);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("horizon") = 1.0, py::arg("seed") = 0,
        py::arg("stream") = 0);
  m.def("simulate_subordinator",
        [](double beta, double step, double horizon, std::uint64_t seed, std::uint64_t stream) {
          return subordinator_path(beta, step, horizon, {seed, stream});
        },
        py::arg("beta"), py::arg("step"), py::arg("horizon") = 1.0, py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("inverse_subordinator", &inverse_subordinator, py::arg("subordinator"), py::arg("t"));
  m.def("time_changed_levy",
        [](double alpha, double beta, double step, double horizon, std::uint64_t seed, std::uint64_t stream) {
          return time_changed_levy(alpha, beta, step, horizon, {seed, stream});
        },
        py::arg("alpha"), py::arg("beta"), py::arg("step"), py::arg("horizon") = 1.0, py::arg("seed") = 0,
        py::arg("stream") = 0);
  m.def("truncate_jumps", &truncate_jumps, py::arg("path"), py::arg("delta"));
  m.def("total_variation", &total_variation, py::arg("path"), py::arg("t"));

  // integrals
  m.def("green_position", [](double gamma, double k, double t) { return green_position({gamma, k}, t); },
        py::arg("gamma"), py::arg("k"), py::arg("t"));
  m.def("green_velocity", [](double gamma, double k, double t) { return green_velocity({gamma, k}, t); },
        py::arg("gamma"), py::arg("k"), py::arg("t"));
  m.def("integral_process",
        [](const std::string& f, double alpha, double beta, std::uint64_t n, double horizon, std::uint64_t seed,
           std::uint64_t stream) {
          const ScalingScheme s{n, alpha, beta};
          s.validate();
          return integral_process(parse_integrand(f), skeleton_for(alpha, beta, n, horizon, seed, stream), s, horizon);
        },
        py::arg("f"), py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("horizon") = 1.0, py::arg("seed") = 0,
        py::arg("stream") = 0);
  m.def("limit_integral",
        [](const std::string& f, double alpha, double beta, double step, double horizon, std::uint64_t seed,
           std::uint64_t stream) {
          return limit_integral(parse_integrand(f), alpha, beta, step, horizon, {seed, stream});
        },
        py::arg("f"), py::arg("alpha"), py::arg("beta"), py::arg("step"), py::arg("horizon") = 1.0,
        py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("change_of_variables_check",
        [](const std::string& f, double alpha, double beta, double step, double horizon, std::uint64_t seed,
           std::uint64_t stream) {
          return change_of_variables_check(parse_integrand(f), alpha, beta, step, horizon, {seed, stream});
        },
        py::arg("f"), py::arg("alpha"), py::arg("beta"), py::arg("step"), py::arg("horizon") = 1.0,
        py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("oscillator_response",
        [](double gamma, double k, double alpha, double beta, std::uint64_t n, double horizon, bool velocity,
           std::size_t points, std::uint64_t seed, std::uint64_t stream) {
          const OscillatorParams p{gamma, k};
          p.validate();
          const ScalingScheme s{n, alpha, beta};
          s.validate();
          return oscillator_response(p, skeleton_for(alpha, beta, n, horizon, seed, stream), s, horizon,
                                     velocity ? Response::velocity : Response::position, points);
        },
        py::arg("gamma"), py::arg("k"), py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("horizon") = 10.0,
        py::arg("velocity") = false, py::arg("points") = 2048, py::arg("seed") = 0, py::arg("stream") = 0);

  // Skorokhod metrics
  m.def("segment_distance", &segment_distance, py::arg("v2"), py::arg("v1"), py::arg("v3"));
  m.def("uniform_distance", &uniform_distance, py::arg("x"), py::arg("y"));
  m.def("j1_distance", &j1_distance, py::arg("x"), py::arg("y"), py::arg("tol") = 1e-9);
  m.def("m1_distance", &m1_distance, py::arg("x"), py::arg("y"), py::arg("tol") = 1e-9);
  m.def("m1_modulus", py::overload_cast<const StepPath&, double>(&m1_modulus), py::arg("x"), py::arg("delta"));
  m.def("m1_distance_infinite",
        [](const StepPath& x, const StepPath& y, double step, double tol) {
          const InfiniteM1 r = m1_distance_infinite(x, y, step, tol);
          return py::make_tuple(r.value, r.tail_bound);
        },
        py::arg("x"), py::arg("y"), py::arg("step") = 0.05, py::arg("tol") = 1e-6);

  // diagnostics
  m.def("ks_two_sample", [](std::vector<double> a, std::vector<double> b) { return ks_two_sample(a, b); },
        py::arg("a"), py::arg("b"));
  m.def("ks_critical_value", &ks_critical_value, py::arg("level"), py::arg("n"), py::arg("m") = 0);
  m.def("_report_json",
        [](double alpha, double beta, std::vector<std::uint64_t> ns, const std::string& f, double horizon,
           std::size_t samples, std::uint64_t seed, std::vector<double> probe_times, std::vector<double> deltas,
           std::size_t modulus_paths, std::size_t limit_samples, double limit_step, unsigned jobs) {
          EnsembleSpec s;
          s.alpha = alpha;
          s.beta = beta;
          s.ns = std::move(ns);
          s.integrand = f;
          s.horizon = horizon;
          s.samples = samples;
          s.seed = seed;
          s.probe_times = std::move(probe_times);
          s.deltas = std::move(deltas);
          s.modulus_paths = modulus_paths;
          s.limit_samples = limit_samples;
          s.limit_step = limit_step;
          s.validate();
          EnsembleReport r;
          {
            py::gil_scoped_release release;
            r = convergence_report(s, parse_integrand(f), ReportOptions{jobs, false});
          }
          return report_json(r, {{"seed", std::to_string(seed)}});
        });
}
