#pragma once

#include <filesystem>
#include <ostream>
#include <span>

#include "ffst/harness/report.hpp"
#include "ffst/harness/runner.hpp"

namespace ffst::io {

inline constexpr const char* kTimeseriesHeader =
    "time,lambda_or_R,fidelity,density_l2_error,norm_dev,energy,max_abs_vff";
inline constexpr const char* kFieldHeader = "x,value";

/// One row per checkpoint, columns as in kTimeseriesHeader.
void write_timeseries(std::ostream& out, const harness::Report& r);

/// Two-column x,value table.
void write_field(std::ostream& out, std::span<const double> x, std::span<const double> values);

/// Writes report.json, timeseries.csv, density_<k>.csv and vff_<k>.csv into
/// `dir`, creating it if needed.
void write_run_outputs(const std::filesystem::path& dir, const harness::RunResult& result);

}  // namespace ffst::io
