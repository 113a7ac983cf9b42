// ctrwlim command-line tool: sampling, densities, path simulation, integrals,
// Skorokhod distances and convergence reports. Every output carries the resolved
// configuration; files are staged and only moved into place once all succeed.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctrwlim/diagnostics.hpp"
#include "ctrwlim/errors.hpp"
#include "ctrwlim/integrals.hpp"
#include "ctrwlim/io.hpp"
#include "ctrwlim/paths.hpp"
#include "ctrwlim/skorokhod.hpp"
#include "ctrwlim/special.hpp"
#include "ctrwlim/stable.hpp"

namespace fs = std::filesystem;
using namespace ctrwlim;

namespace {

constexpr int kFormatVersion = 1;

struct Output {
  std::string target;  // empty: stdout
  std::string content;
};

struct Run {
  std::vector<Output> outputs;
  std::string summary;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads a flat `key = value` file ('#' starts a comment) and appends `--key value`
// for every key not already given on the command line, so flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    }
  }
  if (file.empty()) return args;
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot read config file '" + file + "'");
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError(file + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParameterError(file + ":" + std::to_string(lineno) + ": empty key");
    if (given.count(key)) continue;
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

std::string strip_brackets(std::string s) {
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  return s;
}

// Options that do not influence the numbers written (so reruns to other files,
// or with another thread count, stay byte-identical).
bool excluded(const std::string& name) {
  static const std::set<std::string> skip{"help", "config", "out", "jobs", "timing"};
  return skip.count(name) || (name.size() > 4 && name.substr(name.size() - 4) == "-out");
}

Metadata resolved_config(const CLI::App& app, const CLI::App& sub) {
  Metadata meta;
  meta.emplace_back("format_version", std::to_string(kFormatVersion));
  meta.emplace_back("command", sub.get_name());
  for (const CLI::App* a : {&app, &sub}) {
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string name = opt->get_lnames().front();
      if (excluded(name)) continue;
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = strip_brackets(opt->get_default_str());
      }
      if (!value.empty()) meta.emplace_back(name, value);
    }
  }
  return meta;
}

std::string seed_text(std::uint64_t seed, std::uint64_t stream) {
  return "seed=" + std::to_string(seed) + " stream=" + std::to_string(stream);
}

// Writes staged outputs; on any failure already written files are removed.
void commit(const Run& run) {
  std::vector<fs::path> written;
  try {
    for (const auto& o : run.outputs) {
      if (o.target.empty()) continue;
      write_file_atomic(o.target, o.content);
      written.emplace_back(o.target);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
  for (const auto& o : run.outputs) {
    if (o.target.empty()) std::cout << o.content;
  }
  std::cout.flush();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Simulation and diagnostics for scaling limits of CTRW stochastic integrals"};
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned jobs = 1;
  bool timing = false;
  std::string out;
  std::string config_file;
  app.add_option("--seed", seed, "Master seed (recorded in every output)");
  app.add_option("--stream", stream, "Stream id for single-path commands");
  app.add_option("--jobs", jobs, "Worker threads for ensemble commands")->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "Record wall-clock times in the report (breaks byte identity)");
  app.add_option("--out", out, "Primary output file (stdout when omitted)");
  app.add_option("--config", config_file, "Flat key=value file; command-line flags override it");

  Run run;
  const auto seedspec = [&] { return SeedSpec{seed, stream}; };

  // --- sample
  auto* sample = app.add_subcommand("sample", "Draw i.i.d. variates");
  std::string law = "symmetric";
  double s_alpha = 2.0, s_beta = 1.0, s_scale = 1.0;
  std::size_t s_count = 1000;
  sample->add_option("--law", law, "symmetric | positive | mittag-leffler")
      ->check(CLI::IsMember({"symmetric", "positive", "mittag-leffler"}));
  sample->add_option("--alpha", s_alpha, "Stable index");
  sample->add_option("--beta", s_beta, "Mittag-Leffler index");
  sample->add_option("--scale", s_scale, "Scale parameter");
  sample->add_option("--count", s_count, "Number of variates")->check(CLI::PositiveNumber);

  // --- density
  auto* density = app.add_subcommand("density", "Limit density on a grid (Fourier inversion)");
  double d_alpha = 2.0, d_beta = 1.0, d_t = 1.0, d_xmax = 10.0;
  std::size_t d_points = 801;
  density->add_option("--alpha", d_alpha, "Stable index of the jumps");
  density->add_option("--beta", d_beta, "Mittag-Leffler index of the waiting times");
  density->add_option("--t", d_t, "Time");
  density->add_option("--x-max", d_xmax, "Grid half-width");
  density->add_option("--points", d_points, "Grid points");

  // --- simulate-ctrw
  auto* sim_ctrw = app.add_subcommand("simulate-ctrw", "Rescaled CTRW path X_n");
  double c_alpha = 2.0, c_beta = 1.0, c_horizon = 1.0;
  std::uint64_t c_n = 1024;
  std::size_t c_points = 1001;
  std::string c_jumps_out;
  sim_ctrw->add_option("--alpha", c_alpha, "Stable index of the jumps");
  sim_ctrw->add_option("--beta", c_beta, "Mittag-Leffler index of the waiting times");
  sim_ctrw->add_option("--n", c_n, "Scaling parameter")->check(CLI::PositiveNumber);
  sim_ctrw->add_option("--horizon", c_horizon, "Time horizon");
  sim_ctrw->add_option("--points", c_points, "Sample grid points for the t,value CSV");
  sim_ctrw->add_option("--jumps-out", c_jumps_out, "Exact jump-list CSV");

  // --- simulate-subordinator
  auto* sim_sub = app.add_subcommand("simulate-subordinator", "Stable subordinator on a grid");
  double b_beta = 0.8, b_delta = 1.0 / 1024.0, b_horizon = 1.0;
  std::size_t b_points = 1001;
  std::string b_jumps_out;
  sim_sub->add_option("--beta", b_beta, "Stability index in (0,1]");
  sim_sub->add_option("--delta", b_delta, "Operational grid step");
  sim_sub->add_option("--horizon", b_horizon, "Operational horizon");
  sim_sub->add_option("--points", b_points, "Sample grid points for the t,value CSV");
  sim_sub->add_option("--jumps-out", b_jumps_out, "Exact jump-list CSV");

  // --- integral
  auto* integral = app.add_subcommand("integral", "Stochastic integral I_n (or its limit with --delta)");
  double i_alpha = 2.0, i_beta = 1.0, i_horizon = 1.0, i_delta = 0.0;
  std::uint64_t i_n = 1024;
  std::string i_f = "const:c=1";
  std::string i_path_out;
  std::size_t i_points = 1001;
  integral->add_option("--alpha", i_alpha, "Stable index of the jumps");
  integral->add_option("--beta", i_beta, "Mittag-Leffler index of the waiting times");
  integral->add_option("--n", i_n, "Scaling parameter")->check(CLI::PositiveNumber);
  integral->add_option("--delta", i_delta,
                       "Simulate the limit integral on this operational grid step instead (0 = off)");
  integral->add_option("--horizon", i_horizon, "Time horizon");
  integral->add_option("--f,--integrand", i_f, "Integrand: const[:c=..], cos[:freq=..,phase=..], "
                                               "green_position[:gamma=..,k=..], green_velocity, or a number");
  integral->add_option("--path-out", i_path_out, "Additional t,value CSV");
  integral->add_option("--points", i_points, "Sample grid points for --path-out");

  // --- oscillator
  auto* osc = app.add_subcommand("oscillator", "Damped oscillator driven by the scaled CTRW");
  double o_alpha = 2.0, o_beta = 1.0, o_horizon = 10.0, o_gamma = 1.0, o_k = 1.0;
  std::uint64_t o_n = 1024;
  std::size_t o_points = 2048;
  std::string o_response = "position";
  osc->add_option("--alpha", o_alpha, "Stable index of the jumps");
  osc->add_option("--beta", o_beta, "Mittag-Leffler index of the waiting times");
  osc->add_option("--n", o_n, "Scaling parameter")->check(CLI::PositiveNumber);
  osc->add_option("--horizon", o_horizon, "Time horizon");
  osc->add_option("--gamma", o_gamma, "Damping");
  osc->add_option("--k", o_k, "Stiffness (omega^2)");
  osc->add_option("--response", o_response, "position | velocity")
      ->check(CLI::IsMember({"position", "velocity"}));
  osc->add_option("--points", o_points, "Grid points");

  // --- distance
  auto* distance = app.add_subcommand("distance", "J1 and M1 distances between two jump-list CSVs");
  std::string x_file, y_file;
  double tol = 1e-9;
  distance->add_option("--x", x_file, "First path (jump-list CSV)")->required()->check(CLI::ExistingFile);
  distance->add_option("--y", y_file, "Second path (jump-list CSV)")->required()->check(CLI::ExistingFile);
  distance->add_option("--tol", tol, "Bisection tolerance");

  // --- modulus
  auto* modulus = app.add_subcommand("modulus", "M1 modulus w(x, delta) of a jump-list CSV");
  std::string m_path;
  std::vector<double> m_deltas{0.2, 0.1, 0.05, 0.02};
  modulus->add_option("--path", m_path, "Path (jump-list CSV)")->required()->check(CLI::ExistingFile);
  modulus->add_option("--deltas", m_deltas, "Window half-widths")->delimiter(',');

  // --- report
  auto* report = app.add_subcommand("report", "Convergence report over an ensemble");
  EnsembleSpec spec;
  std::string ks_out, mod_out;
  report->add_option("--alpha", spec.alpha, "Stable index of the jumps");
  report->add_option("--beta", spec.beta, "Mittag-Leffler index of the waiting times");
  report->add_option("--n", spec.ns, "Scaling parameters")->delimiter(',');
  report->add_option("--f,--integrand", spec.integrand, "Integrand spec");
  report->add_option("--horizon", spec.horizon, "Time horizon");
  report->add_option("--samples", spec.samples, "Paths per n");
  report->add_option("--probe-times", spec.probe_times, "Times for the marginal checks")->delimiter(',');
  report->add_option("--deltas", spec.deltas, "Modulus window half-widths")->delimiter(',');
  report->add_option("--modulus-paths", spec.modulus_paths, "Paths entering the modulus average");
  report->add_option("--limit-samples", spec.limit_samples, "Simulated limit paths");
  report->add_option("--limit-step", spec.limit_step, "Operational grid step of the limit simulation");
  report->add_option("--density-points", spec.density_points, "Fourier density grid points");
  report->add_option("--ks-out", ks_out, "CSV n,t,ks");
  report->add_option("--modulus-out", mod_out, "CSV n,delta,modulus");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const Metadata meta = resolved_config(app, *chosen);

  try {
    if (chosen == sample) {
      std::vector<double> v;
      if (law == "symmetric") {
        const StableLaw l{s_alpha, s_scale, Skew::symmetric};
        l.validate();
        v = sample_symmetric_stable(l, seedspec(), s_count);
      } else if (law == "positive") {
        const StableLaw l{s_alpha, s_scale, Skew::positive};
        l.validate();
        v = sample_subordinator_increment(l, seedspec(), s_count);
      } else {
        const MittagLefflerLaw l{s_beta, s_scale};
        l.validate();
        v = sample_ml_waiting_time(l, seedspec(), s_count);
      }
      run.outputs.push_back({out, values_csv("value", v, meta)});
      run.summary = "sample: " + std::to_string(v.size()) + " " + law + " variates, " + seed_text(seed, stream);
    } else if (chosen == density) {
      const DensityGrid g = limit_density(d_alpha, d_beta, d_t, GridSpec{d_xmax, d_points});
      run.outputs.push_back({out, density_csv(g, meta)});
      run.summary = "density: " + std::to_string(g.x_values.size()) + " points, mass " + format_real(g.mass) +
                    ", " + seed_text(seed, stream);
    } else if (chosen == sim_ctrw) {
      const ScalingScheme scheme{c_n, c_alpha, c_beta};
      scheme.validate();
      detail::require(c_horizon > 0.0, "horizon must be positive");
      detail::require(c_points >= 2, "points must be at least 2");
      const CtrwLaws laws{StableLaw{c_alpha, 1.0, Skew::symmetric}, MittagLefflerLaw{c_beta, 1.0}};
      laws.validate();
      const RenewalSkeleton sk = generate_skeleton(laws, seedspec(), static_cast<double>(c_n) * c_horizon);
      const StepPath x = ctrw_path(sk, scheme, c_horizon);
      run.outputs.push_back({out, path_csv(x, c_points, meta)});
      if (!c_jumps_out.empty()) run.outputs.push_back({c_jumps_out, jumps_csv(x, meta)});
      run.summary = "simulate-ctrw: " + std::to_string(x.size()) + " jumps, X(T) = " +
                    format_real(x(c_horizon)) + ", " + seed_text(seed, stream);
    } else if (chosen == sim_sub) {
      detail::require(b_horizon > 0.0, "horizon must be positive");
      detail::require(b_points >= 2, "points must be at least 2");
      const StepPath d = subordinator_path(b_beta, b_delta, b_horizon, seedspec());
      run.outputs.push_back({out, path_csv(d, b_points, meta)});
      if (!b_jumps_out.empty()) run.outputs.push_back({b_jumps_out, jumps_csv(d, meta)});
      run.summary = "simulate-subordinator: D(T) = " + format_real(d(d.horizon())) + ", " + seed_text(seed, stream);
    } else if (chosen == integral) {
      const Integrand f = parse_integrand(i_f);
      detail::require(i_horizon > 0.0, "horizon must be positive");
      detail::require(i_delta >= 0.0, "delta must be non-negative");
      StepPath I;
      if (i_delta > 0.0) {
        I = limit_integral(f, i_alpha, i_beta, i_delta, i_horizon, seedspec());
      } else {
        const ScalingScheme scheme{i_n, i_alpha, i_beta};
        scheme.validate();
        const CtrwLaws laws{StableLaw{i_alpha, 1.0, Skew::symmetric}, MittagLefflerLaw{i_beta, 1.0}};
        laws.validate();
        const RenewalSkeleton sk = generate_skeleton(laws, seedspec(), static_cast<double>(i_n) * i_horizon);
        I = integral_process(f, sk, scheme, i_horizon);
      }
      Metadata m = meta;
      m.emplace_back("integrand_canonical", f.name());
      m.emplace_back("final_value", format_real(I(I.horizon())));
      run.outputs.push_back({out, jumps_csv(I, m)});
      if (!i_path_out.empty()) run.outputs.push_back({i_path_out, path_csv(I, i_points, m)});
      run.summary = "integral: " + std::to_string(I.size()) + " jumps, I(T) = " + format_real(I(I.horizon())) +
                    ", " + seed_text(seed, stream);
    } else if (chosen == osc) {
      const OscillatorParams p{o_gamma, o_k};
      p.validate();
      const ScalingScheme scheme{o_n, o_alpha, o_beta};
      scheme.validate();
      detail::require(o_horizon > 0.0, "horizon must be positive");
      const CtrwLaws laws{StableLaw{o_alpha, 1.0, Skew::symmetric}, MittagLefflerLaw{o_beta, 1.0}};
      laws.validate();
      const RenewalSkeleton sk = generate_skeleton(laws, seedspec(), static_cast<double>(o_n) * o_horizon);
      const StepPath r = oscillator_response(p, sk, scheme, o_horizon,
                                             o_response == "position" ? Response::position : Response::velocity,
                                             o_points);
      Metadata m = meta;
      m.emplace_back("regime", to_string(p.regime()));
      run.outputs.push_back({out, path_csv(r, o_points, m)});
      run.summary = "oscillator (" + std::string(to_string(p.regime())) + "): x(T) = " +
                    format_real(r(o_horizon)) + ", " + seed_text(seed, stream);
    } else if (chosen == distance) {
      detail::require(tol > 0.0, "tol must be positive");
      const StepPath x = read_jumps_csv(x_file);
      const StepPath y = read_jumps_csv(y_file);
      const double j1 = j1_distance(x, y, tol);
      const double m1 = m1_distance(x, y, tol);
      nlohmann::ordered_json j;
      j["j1"] = j1;
      j["m1"] = m1;
      j["tol"] = tol;
      nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
      for (const auto& [k, v] : meta) cfg[k] = v;
      j["config"] = cfg;
      run.outputs.push_back({out, j.dump(2) + "\n"});
      run.summary = "distance: j1 = " + format_real(j1) + ", m1 = " + format_real(m1) + ", " +
                    seed_text(seed, stream);
    } else if (chosen == modulus) {
      const StepPath x = read_jumps_csv(m_path);
      std::vector<double> w;
      for (double d : m_deltas) {
        detail::require(d > 0.0, "deltas must be positive");
        w.push_back(m1_modulus(x, d));
      }
      run.outputs.push_back({out, table_csv("delta", "w", m_deltas, w, meta)});
      run.summary = "modulus: " + std::to_string(w.size()) + " deltas, " + seed_text(seed, stream);
    } else if (chosen == report) {
      spec.seed = seed;
      spec.validate();
      const Integrand f = parse_integrand(spec.integrand);
      const auto t0 = std::chrono::steady_clock::now();
      const EnsembleReport r = convergence_report(spec, f, ReportOptions{jobs, timing});
      run.outputs.push_back({out, report_json(r, meta)});
      if (!ks_out.empty()) run.outputs.push_back({ks_out, report_ks_csv(r, meta)});
      if (!mod_out.empty()) run.outputs.push_back({mod_out, report_modulus_csv(r, meta)});
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      double worst = 0.0;
      for (const auto& rec : r.per_n) {
        for (double k : rec.ks) worst = std::max(worst, k);
      }
      std::ostringstream s;
      s.precision(3);
      s << "report: " << r.per_n.size() << " n values x " << spec.samples << " paths, max KS " << worst
        << " (" << r.limit_method << "), " << secs << " s, " << seed_text(seed, stream);
      run.summary = s.str();
    }
    commit(run);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  // The summary goes to stderr when stdout carries data.
  bool to_stdout = false;
  for (const auto& o : run.outputs) to_stdout = to_stdout || o.target.empty();
  (to_stdout ? std::cerr : std::cout) << run.summary << "\n";
  return 0;
}
