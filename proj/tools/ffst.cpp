// ffst: run, validate and list fast-forward simulation scenarios.

#include <iostream>

#include <CLI11.hpp>

#include "ffst/io/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fast-forward and shortcut-to-adiabaticity simulations in one dimension"};
  app.require_subcommand(1);

  std::string run_source;
  std::optional<std::string> out_dir;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run a scenario and write report.json, timeseries.csv and field dumps");
  run->add_option("file", run_source, "Scenario file, or builtin:<name>")->required();
  run->add_option("--out", out_dir, "Output directory (default: $FFST_OUT_DIR, else ffst-out/<name>)");
  run->add_option("--set", overrides, "Override a scenario value, e.g. --set numerics.dt=5e-5")
      ->take_all();

  std::string validate_source;
  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("file", validate_source, "Scenario file, or builtin:<name>")->required();

  auto* list = app.add_subcommand("list-builtin", "List the bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ffst::io::kSchemaError;
  }

  if (*run) {
    std::optional<std::filesystem::path> dir;
    if (out_dir) dir = *out_dir;
    return ffst::io::cmd_run(run_source, dir, overrides, std::cout, std::cerr);
  }
  if (*validate) return ffst::io::cmd_validate(validate_source, std::cout, std::cerr);
  if (*list) return ffst::io::cmd_list_builtin(std::cout);
  return ffst::io::kSchemaError;
}
