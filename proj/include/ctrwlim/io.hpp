#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctrwlim/diagnostics.hpp"
#include "ctrwlim/paths.hpp"
#include "ctrwlim/special.hpp"

namespace ctrwlim {

/// Locale-independent text form with 17 significant digits (round-trips exactly).
std::string format_real(double v);
/// Parses a real written by format_real (or any plain decimal/scientific literal).
double parse_real(std::string_view text);

/// Ordered key=value metadata, written as leading `# key=value` comment lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string csv_header(const Metadata& meta);

/// `t,value` rows at `points` uniform times of [0, horizon].
std::string path_csv(const StepPath& path, std::size_t points, const Metadata& meta);
/// Exact jump list `jump_time,jump_size`; horizon and initial value go to the metadata.
std::string jumps_csv(const StepPath& path, const Metadata& meta);
std::string density_csv(const DensityGrid& grid, const Metadata& meta);
/// Two-column table with the given header names.
std::string table_csv(const std::string& col1, const std::string& col2,
                      std::span<const double> a, std::span<const double> b, const Metadata& meta);
std::string values_csv(const std::string& column, std::span<const double> v, const Metadata& meta);

/// Reads a jump-list CSV. `horizon` and `initial` are taken from its metadata
/// (the horizon defaults to the last jump time when absent).
StepPath read_jumps_csv(const std::filesystem::path& file);

/// Reads a `t,value` CSV as a polyline (used for tabulated integrands).
StepPath read_polyline_csv(const std::filesystem::path& file);

/// JSON report: {format_version, config, spec, limit, per_n, seed, runtime_sec}.
std::string report_json(const EnsembleReport& report, const Metadata& config);
/// CSV tables `n,t,ks` and `n,delta,modulus`.
std::string report_ks_csv(const EnsembleReport& report, const Metadata& meta);
std::string report_modulus_csv(const EnsembleReport& report, const Metadata& meta);

/// Writes via a temporary file in the same directory and an atomic rename.
void write_file_atomic(const std::filesystem::path& file, const std::string& content);

}  // namespace ctrwlim
