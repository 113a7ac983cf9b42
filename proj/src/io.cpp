#include "ctrwlim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

// Shortest round-trip form, used for JSON keys.
std::string short_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

double parse_real(std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) {
    throw ParameterError("cannot parse '" + t + "' as a real number");
  }
  return v;
}

std::string csv_header(const Metadata& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  return out;
}

std::string path_csv(const StepPath& path, std::size_t points, const Metadata& meta) {
  detail::require(points >= 2, "path CSV needs at least two sample points");
  std::string out = csv_header(meta) + "t,value\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double t = i + 1 == points
                         ? path.horizon()
                         : path.horizon() * static_cast<double>(i) / static_cast<double>(points - 1);
    out += format_real(t) + "," + format_real(path(t)) + "\n";
  }
  return out;
}

std::string jumps_csv(const StepPath& path, const Metadata& meta) {
  Metadata m = meta;
  m.emplace_back("horizon", format_real(path.horizon()));
  m.emplace_back("initial", format_real(path.initial_value()));
  std::string out = csv_header(m) + "jump_time,jump_size\n";
  const auto times = path.times();
  const auto inc = path.increments();
  if (!path.is_step()) {
    // Polylines have no jumps; list nothing but keep the header.
    return out;
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_real(times[i]) + "," + format_real(inc[i]) + "\n";
  }
  return out;
}

std::string density_csv(const DensityGrid& grid, const Metadata& meta) {
  Metadata m = meta;
  m.emplace_back("mass", format_real(grid.mass));
  m.emplace_back("clamped_negative", std::to_string(grid.clamped_negative));
  m.emplace_back("origin_excluded", grid.origin_excluded ? "true" : "false");
  std::string out = csv_header(m) + "x,density\n";
  for (std::size_t i = 0; i < grid.x_values.size(); ++i) {
    out += format_real(grid.x_values[i]) + "," + format_real(grid.density_values[i]) + "\n";
  }
  return out;
}

std::string table_csv(const std::string& col1, const std::string& col2,
                      std::span<const double> a, std::span<const double> b, const Metadata& meta) {
  detail::require(a.size() == b.size(), "table columns must have equal length");
  std::string out = csv_header(meta) + col1 + "," + col2 + "\n";
  for (std::size_t i = 0; i < a.size(); ++i) out += format_real(a[i]) + "," + format_real(b[i]) + "\n";
  return out;
}

std::string values_csv(const std::string& column, std::span<const double> v, const Metadata& meta) {
  std::string out = csv_header(meta) + column + "\n";
  for (double x : v) out += format_real(x) + "\n";
  return out;
}

namespace {

struct CsvData {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvData read_csv(const std::filesystem::path& file, std::size_t expected_columns) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot open '" + file.string() + "' for reading");
  CsvData d;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) d.meta.emplace_back(trim(t.substr(1, eq - 1)), trim(t.substr(eq + 1)));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != expected_columns) {
      throw ParameterError(file.string() + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(expected_columns) + " columns");
    }
    if (d.columns.empty()) {
      d.columns = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        row.push_back(parse_real(c));
      } catch (const ParameterError&) {
        throw ParameterError(file.string() + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    d.rows.push_back(std::move(row));
  }
  if (d.columns.empty()) throw ParameterError("'" + file.string() + "' has no header row");
  return d;
}

const std::string* find_meta(const Metadata& meta, std::string_view key) {
  for (const auto& [k, v] : meta) {
    if (k == key) return &v;
  }
  return nullptr;
}

}  // namespace

StepPath read_jumps_csv(const std::filesystem::path& file) {
  const CsvData d = read_csv(file, 2);
  std::vector<double> times;
  std::vector<double> sizes;
  for (const auto& r : d.rows) {
    times.push_back(r[0]);
    sizes.push_back(r[1]);
  }
  double horizon = times.empty() ? 0.0 : times.back();
  if (const auto* h = find_meta(d.meta, "horizon")) horizon = parse_real(*h);
  double initial = 0.0;
  if (const auto* v = find_meta(d.meta, "initial")) initial = parse_real(*v);
  detail::require(horizon > 0.0, file.string() + ": horizon missing or not positive");
  return StepPath::from_jumps(times, sizes, horizon, initial);
}

StepPath read_polyline_csv(const std::filesystem::path& file) {
  const CsvData d = read_csv(file, 2);
  std::vector<double> t;
  std::vector<double> v;
  for (const auto& r : d.rows) {
    t.push_back(r[0]);
    v.push_back(r[1]);
  }
  return StepPath::polyline(std::move(t), std::move(v));
}

std::string report_json(const EnsembleReport& report, const Metadata& config) {
  using json = nlohmann::ordered_json;
  const auto& s = report.spec;
  json j;
  j["format_version"] = 1;
  json cfg = json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["spec"] = {{"alpha", s.alpha},
               {"beta", s.beta},
               {"n", s.ns},
               {"integrand", report.integrand},
               {"horizon", s.horizon},
               {"samples", s.samples},
               {"probe_times", s.probe_times},
               {"deltas", s.deltas},
               {"modulus_paths", std::min(s.modulus_paths, s.samples)},
               {"modulus_probes", "uniform-256"},
               {"limit_samples", s.limit_samples},
               {"limit_step", s.limit_step},
               {"density_points", s.density_points}};
  json limit = {{"method", report.limit_method}};
  if (!report.limit_vs_density.empty()) {
    json ks = json::object();
    for (std::size_t p = 0; p < s.probe_times.size(); ++p) {
      ks[short_real(s.probe_times[p])] = report.limit_vs_density[p];
    }
    limit["simulation_vs_density_ks"] = ks;
  }
  j["limit"] = limit;
  json per_n = json::array();
  for (const auto& r : report.per_n) {
    json rec;
    rec["n"] = r.n;
    json ks = json::object();
    json ksd = json::object();
    json mean = json::object();
    json quant = json::object();
    for (std::size_t p = 0; p < s.probe_times.size(); ++p) {
      const std::string key = short_real(s.probe_times[p]);
      ks[key] = r.ks[p];
      if (!r.ks_density.empty()) ksd[key] = r.ks_density[p];
      mean[key] = r.mean[p];
      json q = json::object();
      for (std::size_t i = 0; i < quantile_levels().size(); ++i) {
        q[short_real(quantile_levels()[i])] = r.quantiles[p][i];
      }
      quant[key] = q;
    }
    rec["ks"] = ks;
    if (!r.ks_density.empty()) rec["ks_density"] = ksd;
    rec["mean"] = mean;
    rec["quantiles"] = quant;
    json mod = json::object();
    for (std::size_t d = 0; d < s.deltas.size(); ++d) mod[short_real(s.deltas[d])] = r.modulus[d];
    rec["modulus"] = mod;
    json checks = json::array();
    for (const auto& m : r.mean_checks) {
      checks.push_back({{"operational_t", m.t},
                        {"expected", m.expected},
                        {"empirical", m.empirical},
                        {"standard_error", m.standard_error},
                        {"z", m.z},
                        {"pass", m.pass}});
    }
    rec["mean_checks"] = checks;
    rec["wall_sec"] = r.wall_sec ? json(*r.wall_sec) : json(nullptr);
    per_n.push_back(rec);
  }
  j["per_n"] = per_n;
  j["seed"] = s.seed;
  j["runtime_sec"] = report.runtime_sec ? json(*report.runtime_sec) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string report_ks_csv(const EnsembleReport& report, const Metadata& meta) {
  std::string out = csv_header(meta) + "n,t,ks\n";
  for (const auto& r : report.per_n) {
    for (std::size_t p = 0; p < report.spec.probe_times.size(); ++p) {
      out += std::to_string(r.n) + "," + format_real(report.spec.probe_times[p]) + "," +
             format_real(r.ks[p]) + "\n";
    }
  }
  return out;
}

std::string report_modulus_csv(const EnsembleReport& report, const Metadata& meta) {
  std::string out = csv_header(meta) + "n,delta,modulus\n";
  for (const auto& r : report.per_n) {
    for (std::size_t d = 0; d < report.spec.deltas.size(); ++d) {
      out += std::to_string(r.n) + "," + format_real(report.spec.deltas[d]) + "," +
             format_real(r.modulus[d]) + "\n";
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& file, const std::string& content) {
  const auto dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + file.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + file.string() + "'");
  }
}

}  // namespace ctrwlim
