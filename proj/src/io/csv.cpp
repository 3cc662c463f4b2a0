#include "ffst/io/csv.hpp"

#include <fstream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "ffst/core/errors.hpp"
#include "ffst/io/report_json.hpp"

namespace ffst::io {
namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

void write_timeseries(std::ostream& out, const harness::Report& r) {
  out << kTimeseriesHeader << '\n';
  for (const auto& c : r.checkpoints)
    fmt::print(out, "{},{},{},{},{},{},{}\n", c.time, c.lambda_or_r, c.fidelity, c.density_l2_error,
               c.norm_dev, c.energy, c.max_abs_vff);
}

void write_field(std::ostream& out, std::span<const double> x, std::span<const double> values) {
  if (x.size() != values.size()) throw InvalidArgument("field dump: x and values differ in length");
  out << kFieldHeader << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) fmt::print(out, "{},{}\n", x[i], values[i]);
}

void write_run_outputs(const std::filesystem::path& dir, const harness::RunResult& result) {
  std::filesystem::create_directories(dir);
  open_for_writing(dir / "report.json") << report_to_json(result.report).dump(2) << '\n';
  auto series = open_for_writing(dir / "timeseries.csv");
  write_timeseries(series, result.report);
  const auto& f = result.fields;
  for (std::size_t k = 0; k < f.density.size(); ++k) {
    auto density = open_for_writing(dir / fmt::format("density_{}.csv", k));
    write_field(density, f.x, f.density[k]);
    auto vff = open_for_writing(dir / fmt::format("vff_{}.csv", k));
    write_field(vff, f.x, f.potential[k]);
  }
}

}  // namespace ffst::io
