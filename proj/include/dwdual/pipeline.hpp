#pragma once

// Full batch pipeline: validate -> stress -> branches -> displacements ->
// energies -> stability -> oracle, plus the artifacts it writes.

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwdual/config.hpp"
#include "dwdual/error.hpp"
#include "dwdual/energy.hpp"
#include "dwdual/oracle.hpp"
#include "dwdual/stability.hpp"

namespace dwdual {

struct BranchResult {
  Branch branch = Branch::One;
  DualBranchField zeta;
  CriticalPoint profile;
  EnergyReport energy;
  ResidualField constitutive;  // nu (u'^2/2 - lambda) u' - F r
  ResidualField el_direct;     // conservative finite-difference EL residual
  Classification classification;
  std::array<double, 2> endpoint_strain{};  // u'(R2), u'(R1)
  double endpoint_limit = 0.0;              // analytic limit for branches 1, 2
  double discrete_energy = 0.0;             // oracle energy of the nodal samples
};

struct DescentSummary {
  double start_energy = 0.0;
  double final_energy = 0.0;
  double reference_energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OracleSummary {
  DescentSummary from_branch1;  // branch 1 plus a smooth perturbation
  DescentSummary from_branch3;  // exact samples of branch 3
  int starts = 0;
  std::uint64_t seed = 0;
  double start_amplitude = 0.0;
  int converged = 0;
  std::vector<double> final_energies;
  double min_energy = 0.0;
  double max_energy = 0.0;
  int within_wells = 0;  // final energy in [E1 - tol, E2 + tol]
  double tolerance = 0.0;
};

struct PipelineResult {
  RunConfig config;
  ValidationReport spec_report;
  LoadReport load_report;
  std::optional<LoadFunction> load;
  std::optional<RadialStress> stress;
  std::vector<BranchResult> branches;
  std::optional<OracleSummary> oracle;
};

/// Problem-module checks only. Throws Error(Config) for spec violations and
/// malformed loads, Error(LoadHypothesis) when the load hypotheses fail.
PipelineResult validate_run(const RunConfig& config);

/// Everything. Numerical failures propagate as Error with their own kind.
PipelineResult run_pipeline(const RunConfig& config);

/// Exit status for an error kind: 2 config, 3 load hypothesis, 4 numerical.
int exit_code(ErrorKind kind);

nlohmann::json make_report(const PipelineResult& result, const std::string& timestamp);
std::string utc_timestamp();

/// CSV writers; numbers in %.16e with a header row.
void write_fields_csv(const PipelineResult& result, std::ostream& out);
void write_modes_csv(const PipelineResult& result, std::ostream& out);

/// Human-readable summary.
void write_summary(const PipelineResult& result, std::ostream& out);

/// Writes the artifacts requested by config.formats into `directory`.
std::vector<std::filesystem::path> write_artifacts(const PipelineResult& result,
                                                   const std::filesystem::path& directory,
                                                   const std::string& timestamp);

// ---- re-ingest -------------------------------------------------------------

struct FieldTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Column values; throws Error(Config) if absent.
  std::vector<double> column(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// Throws Error(Config) for empty input or ragged rows, and
/// Error(NumericalFailure) naming the first row holding NaN or inf.
FieldTable read_fields_csv(std::istream& in);
FieldTable read_fields_csv(const std::filesystem::path& path);

struct FieldEnergies {
  std::array<double, 3> primal{};
  std::array<double, 3> dual{};
};

/// Composite Simpson on the tabulated columns (odd row count required).
FieldEnergies energies_from_fields(const FieldTable& table, const ProblemSpec& spec);

}  // namespace dwdual
