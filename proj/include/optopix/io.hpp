#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "optopix/energy.hpp"
#include "optopix/param_fit.hpp"
#include "optopix/thermal_sim.hpp"

namespace optopix {

/// Shortest round-trip decimal form ("0.001", "1e-07"). Locale independent.
std::string format_double(double v);

/// `t_s,T_abs_K,T_air_K[,P_Pa,F_N,z_m]`, one row per sample.
void write_trace_csv(std::ostream& out, const TraceSeries& trace);
std::string trace_to_csv(const TraceSeries& trace);

/// Throws Error{validation, "invalid-trace"} on a bad header, ragged rows,
/// unparsable numbers or non-uniform sampling.
TraceSeries read_trace_csv(std::istream& in);
TraceSeries read_trace_csv_file(const std::filesystem::path& path);

/// Writes `content` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string fit_result_to_json(const FitResult& fit);
std::string efficiency_report_to_json(const EfficiencyReport& report);

}  // namespace optopix
