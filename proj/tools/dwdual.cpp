// dwdual: batch driver for the annulus double-well solver.
//
//   dwdual solve <config.json> [--output-dir DIR] [--quiet]
//   dwdual validate <config.json> [--quiet]
//   dwdual plot <fields.csv> [--output-dir DIR] [--quiet]
//
// Exit status: 0 success, 2 configuration or input error, 3 load hypothesis
// failure, 4 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dwdual/config.hpp"
#include "dwdual/error.hpp"
#include "dwdual/pipeline.hpp"
#include "dwdual/plot.hpp"

namespace fs = std::filesystem;
using namespace dwdual;

namespace {

int solve(const fs::path& config_path, const std::optional<fs::path>& out_dir, bool quiet) {
  const auto config = load_config(config_path);
  const auto result = run_pipeline(config);
  const fs::path dir = out_dir ? *out_dir : fs::path(config.output_directory);
  const auto files = write_artifacts(result, dir, utc_timestamp());
  if (!quiet) {
    write_summary(result, std::cout);
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  }
  return 0;
}

int validate(const fs::path& config_path, bool quiet) {
  const auto config = load_config(config_path);
  const auto result = validate_run(config);
  if (!quiet) {
    for (const auto& c : result.spec_report.checks) {
      std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    }
    const auto& lr = result.load_report;
    std::cout << "ok   load balance " << lr.balance_residual << " <= " << lr.balance_tolerance << '\n'
              << "ok   single zero at r3 = " << lr.r3 << '\n'
              << "ok   L1 norm " << lr.l1_norm << " < " << lr.l1_bound << '\n';
  }
  return 0;
}

int plot(const fs::path& csv, const std::optional<fs::path>& out_dir, bool quiet) {
  const fs::path dir = out_dir ? *out_dir : (csv.has_parent_path() ? csv.parent_path() : fs::path("."));
  const auto files = emit_profile_plots(csv, dir);
  if (!quiet) {
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical duality solver for the double-well problem on an annulus"};
  app.require_subcommand(1);

  bool quiet = false;
  std::optional<fs::path> out_dir;
  app.add_flag("-q,--quiet", quiet, "Suppress the human-readable summary");

  fs::path solve_config, validate_config, fields_csv;
  auto* solve_cmd = app.add_subcommand("solve", "Run the full pipeline and write the artifacts");
  solve_cmd->add_option("config", solve_config, "JSON configuration")->required();
  solve_cmd->add_option("-o,--output-dir", out_dir, "Override output.directory");
  solve_cmd->add_flag("-q,--quiet", quiet, "Suppress the human-readable summary");

  auto* validate_cmd = app.add_subcommand("validate", "Check the problem data only");
  validate_cmd->add_option("config", validate_config, "JSON configuration")->required();
  validate_cmd->add_flag("-q,--quiet", quiet, "Suppress output");

  auto* plot_cmd = app.add_subcommand("plot", "Render SVG profiles from a fields.csv");
  plot_cmd->add_option("fields", fields_csv, "fields.csv written by solve")->required();
  plot_cmd->add_option("-o,--output-dir", out_dir, "Directory for the SVG files");
  plot_cmd->add_flag("-q,--quiet", quiet, "Suppress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve_cmd) return solve(solve_config, out_dir, quiet);
    if (*validate_cmd) return validate(validate_config, quiet);
    if (*plot_cmd) return plot(fields_csv, out_dir, quiet);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
