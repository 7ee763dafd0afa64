#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dwdual/config.hpp"
#include "dwdual/error.hpp"
#include "dwdual/pipeline.hpp"
#include "dwdual/plot.hpp"

using namespace dwdual;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json reference_doc() {
  return json::parse(R"({
    "spec": {"nu": 1.0, "lambda": 1.0, "R1": 2.0, "R2": 1.0, "n": 2},
    "load": {"type": "linear", "amplitude": 0.2},
    "grid": {"nodes": 2001},
    "stability": {"max_mode": 8, "elements": 400},
    "oracle": {"enabled": true, "starts": 4, "seed": 42},
    "output": {"directory": "out", "formats": ["csv", "json", "modes"]}
  })");
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

Error pipeline_error(const json& doc) {
  try {
    run_pipeline(parse_config(doc));
  } catch (const Error& e) {
    return e;
  }
  return Error(ErrorKind::Internal, "no error");
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dwdual_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DWDUAL_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("config parses the reference document") {
  const auto cfg = parse_config(reference_doc());
  CHECK(cfg.spec.n == 2);
  CHECK(cfg.spec.R1 == 2.0);
  CHECK(cfg.load.type == "linear");
  CHECK(cfg.load.amplitude == 0.2);
  CHECK(cfg.grid_nodes == 2001);
  CHECK(cfg.max_mode == 8);
  CHECK(cfg.oracle_seed == 42);
  CHECK(cfg.wants("json"));
  CHECK_FALSE(cfg.wants("plots"));

  const auto again = parse_config(to_json(cfg));
  CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("config defaults for optional sections") {
  auto doc = reference_doc();
  doc.erase("grid");
  doc.erase("stability");
  doc.erase("oracle");
  doc.erase("output");
  const auto cfg = parse_config(doc);
  CHECK(cfg.grid_nodes == 2001);
  CHECK(cfg.max_mode == 8);
  CHECK(cfg.oracle_enabled);
}

TEST_CASE("config diagnostics carry the field path") {
  auto doc = reference_doc();
  doc["spec"]["poisson"] = 0.3;
  CHECK(config_error(doc).starts_with("spec.poisson: unknown key"));

  doc = reference_doc();
  doc["extra"] = 1;
  CHECK(config_error(doc).starts_with("extra: unknown key"));

  doc = reference_doc();
  doc["spec"].erase("lambda");
  CHECK(config_error(doc).starts_with("spec.lambda: missing"));

  doc = reference_doc();
  doc["grid"]["nodes"] = 2001.5;
  CHECK(config_error(doc).starts_with("grid.nodes: expected an integer"));

  doc = reference_doc();
  doc["grid"]["nodes"] = 2;
  CHECK(config_error(doc).starts_with("grid.nodes:"));

  doc = reference_doc();
  doc["spec"]["nu"] = "one";
  CHECK(config_error(doc).starts_with("spec.nu: expected a number"));

  doc = reference_doc();
  doc["load"]["type"] = "quadratic";
  CHECK(config_error(doc).starts_with("load.type:"));

  doc = reference_doc();
  doc["load"]["points"] = json::array();
  CHECK(config_error(doc).starts_with("load.points: unknown key"));

  doc = reference_doc();
  doc["load"] = {{"type", "table"}, {"points", {{1.0, 0.1}, {2.0}}}};
  CHECK(config_error(doc).starts_with("load.points[1]:"));

  doc = reference_doc();
  doc["output"]["formats"] = {"csv", "xlsx"};
  CHECK(config_error(doc).starts_with("output.formats[1]:"));

  doc = reference_doc();
  doc["oracle"]["enabled"] = 1;
  CHECK(config_error(doc).starts_with("oracle.enabled:"));
}

TEST_CASE("pipeline errors map to exit codes") {
  auto doc = reference_doc();
  doc["spec"]["R1"] = 0.5;
  auto e = pipeline_error(doc);
  CHECK(e.kind() == ErrorKind::Config);
  CHECK(std::string(e.what()).starts_with("spec.R1:"));
  CHECK(exit_code(e.kind()) == 2);

  doc = reference_doc();
  doc["load"]["amplitude"] = 1e6;
  e = pipeline_error(doc);
  CHECK(e.kind() == ErrorKind::LoadHypothesis);
  CHECK(std::string(e.what()).find("L1 norm") != std::string::npos);
  CHECK(exit_code(e.kind()) == 3);

  doc = reference_doc();
  doc["load"]["amplitude"] = 0.0;
  CHECK(exit_code(pipeline_error(doc).kind()) == 2);

  doc = reference_doc();
  doc["load"] = {{"type", "table"}, {"points", {{1.0, 0.1}, {1.5, 0.0}, {1.4, -0.1}, {2.0, -0.1}}}};
  e = pipeline_error(doc);
  CHECK(e.kind() == ErrorKind::Config);
  CHECK(std::string(e.what()).starts_with("load.points:"));

  doc = reference_doc();
  doc["load"] = {{"type", "table"}, {"points", {{1.0, 0.1}, {1.5, -0.1}}}};
  CHECK(std::string(pipeline_error(doc).what()).starts_with("load.points:"));

  // Unbalanced table: single zero, small norm, nonzero balance integral.
  doc = reference_doc();
  doc["load"] = {{"type", "table"}, {"points", {{1.0, 0.1}, {1.2, 0.0}, {2.0, -0.1}}}};
  e = pipeline_error(doc);
  CHECK(e.kind() == ErrorKind::LoadHypothesis);
  CHECK(std::string(e.what()).find("balance") != std::string::npos);

  CHECK(exit_code(ErrorKind::AmplitudeOverflow) == 4);
  CHECK(exit_code(ErrorKind::NoGapViolation) == 4);
  CHECK(exit_code(ErrorKind::NumericalFailure) == 4);
}

TEST_CASE("reference pipeline, artifacts and round trip") {
  const auto cfg = parse_config(reference_doc());
  const auto result = run_pipeline(cfg);
  REQUIRE(result.branches.size() == 3);
  const char* verdicts[] = {"local-min", "radial-min-but-angular-unstable", "local-max"};
  for (const auto& b : result.branches) {
    CHECK(b.energy.gap <= 1e-8);
    CHECK(b.constitutive.max_abs <= 1e-9);
    CHECK(std::string(to_string(b.classification.verdict)) == verdicts[index(b.branch) - 1]);
  }
  REQUIRE(result.oracle);
  CHECK(result.oracle->converged == 4);
  CHECK(result.oracle->within_wells == 4);
  CHECK(std::abs(result.oracle->from_branch1.final_energy - result.oracle->from_branch1.reference_energy) <= 1e-8);
  CHECK(result.oracle->from_branch3.final_energy < result.oracle->from_branch3.start_energy);

  const auto dir = scratch_dir("reference");
  const auto files = write_artifacts(result, dir, "2026-01-01T00:00:00Z");
  CHECK(files.size() == 3);
  const auto report = json::parse(slurp(dir / "report.json"));
  CHECK(report["timestamp"] == "2026-01-01T00:00:00Z");
  CHECK(report["branches"].size() == 3);
  CHECK(report["branches"][1]["stability"]["verdict"] == "radial-min-but-angular-unstable");
  CHECK(report["branches"][0]["stability"]["modes"].size() == 9);
  CHECK(report["stress"]["certified"] == true);
  CHECK(report["validation"]["load"]["l1_ok"] == true);

  const auto csv = slurp(dir / "fields.csv");
  CHECK(csv.starts_with("r,f,G,F,sigma_norm_sq,zeta1,zeta2,zeta3,u1,u2,u3,strain1,strain2,strain3\n"));
  CHECK(csv.find("1.0000000000000000e+00,") != std::string::npos);

  const auto table = read_fields_csv(dir / "fields.csv");
  CHECK(table.rows.size() == 2001);
  const auto e = energies_from_fields(table, cfg.spec);
  for (int i = 0; i < 3; ++i) {
    const auto& en = report["branches"][i]["energies"];
    CHECK(std::abs(e.primal[static_cast<std::size_t>(i)] - en["primal"].get<double>()) <= 1e-10);
    CHECK(std::abs(e.dual[static_cast<std::size_t>(i)] - en["dual"].get<double>()) <= 1e-10);
  }

  const auto modes = slurp(dir / "modes.csv");
  CHECK(modes.starts_with("branch,l,kappa,min_eigenvalue,max_eigenvalue\n"));
  CHECK(std::count(modes.begin(), modes.end(), '\n') == 1 + 3 * 9);

  // Determinism: a second run differs only in the timestamp.
  const auto second = run_pipeline(cfg);
  CHECK(make_report(second, "x").dump() == make_report(result, "x").dump());
  std::ostringstream a, b;
  write_fields_csv(result, a);
  write_fields_csv(second, b);
  CHECK(a.str() == b.str());

  std::ostringstream summary;
  write_summary(result, summary);
  CHECK(summary.str().find("branch 2:") != std::string::npos);
}

TEST_CASE("one- and three-dimensional runs") {
  for (int n : {1, 3}) {
    auto doc = reference_doc();
    doc["spec"]["n"] = n;
    doc["grid"]["nodes"] = 801;
    doc["stability"]["max_mode"] = 3;
    doc["oracle"]["enabled"] = false;
    const auto r = run_pipeline(parse_config(doc));
    CHECK_FALSE(r.oracle);
    for (const auto& b : r.branches) CHECK(b.energy.gap <= 1e-8);
    CHECK(r.branches[1].classification.verdict == (n == 1 ? Verdict::LocalMin : Verdict::RadialMinAngularUnstable));
    CHECK(r.branches[1].classification.spectrum.modes.size() == (n == 1 ? 1u : 4u));
    const auto report = make_report(r, "t");
    CHECK(report["oracle"].is_null());
  }
}

TEST_CASE("tabulated balanced load runs end to end") {
  // Samples of the balanced linear load: the table is exact for linear data.
  const ProblemSpec spec{1.0, 1.0, 2.0, 1.0, 2};
  const auto lin = balanced_linear_load(spec, 0.2);
  json pts = json::array();
  for (int i = 0; i <= 10; ++i) {
    const double r = 1.0 + i / 10.0;
    pts.push_back({r, lin(r)});
  }
  auto doc = reference_doc();
  doc["load"] = {{"type", "table"}, {"points", pts}};
  doc["grid"]["nodes"] = 401;
  doc["oracle"]["enabled"] = false;
  const auto r = run_pipeline(parse_config(doc));
  auto ref_doc = reference_doc();
  ref_doc["grid"]["nodes"] = 401;
  ref_doc["oracle"]["enabled"] = false;
  const auto ref = run_pipeline(parse_config(ref_doc));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.branches[i].energy.primal == doctest::Approx(ref.branches[i].energy.primal).epsilon(1e-10));
  }
}

TEST_CASE("plots") {
  const auto dir = scratch_dir("plots");
  auto doc = reference_doc();
  doc["grid"]["nodes"] = 201;
  doc["oracle"]["enabled"] = false;
  doc["output"]["formats"] = {"csv", "plots"};
  const auto result = run_pipeline(parse_config(doc));
  const auto files = write_artifacts(result, dir, "t");
  CHECK(files.size() == 4);
  for (const char* name : {"displacements.svg", "dual_fields.svg", "stress.svg"}) {
    const auto text = slurp(dir / name);
    CHECK(text.starts_with("<svg"));
    CHECK(text.find("<polyline") != std::string::npos);
  }
  const auto first = slurp(dir / "stress.svg");
  emit_profile_plots(dir / "fields.csv", dir);
  CHECK(slurp(dir / "stress.svg") == first);

  auto kind_of = [&](const std::string& text) {
    write_file(dir / "bad.csv", text);
    try {
      emit_profile_plots(dir / "bad.csv", dir / "bad");
    } catch (const Error& e) {
      return std::make_pair(e.kind(), std::string(e.what()));
    }
    return std::make_pair(ErrorKind::Internal, std::string());
  };
  CHECK(kind_of("").first == ErrorKind::Config);
  CHECK(kind_of("r,u1\n1,2\n").first == ErrorKind::Config);
  // Poison the first column of the third data row (line 4 of the file).
  std::istringstream in(slurp(dir / "fields.csv"));
  std::string line, poisoned;
  for (int k = 1; std::getline(in, line); ++k) {
    if (k == 4) line = "nan" + line.substr(line.find(','));
    poisoned += line + "\n";
  }
  const auto [kind, what] = kind_of(poisoned);
  CHECK(kind == ErrorKind::NumericalFailure);
  CHECK(what.find("row 4") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "bad" / "stress.svg"));
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch_dir("cli");
  auto doc = reference_doc();
  doc["grid"]["nodes"] = 301;
  doc["oracle"]["starts"] = 2;
  doc["output"]["directory"] = (dir / "out").string();
  write_file(dir / "ok.json", doc.dump());
  CHECK(run_cli("solve " + (dir / "ok.json").string() + " --quiet") == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(run_cli("solve " + (dir / "ok.json").string() + " --output-dir " + (dir / "other").string() + " -q") == 0);
  CHECK(fs::exists(dir / "other" / "fields.csv"));
  CHECK(run_cli("validate " + (dir / "ok.json").string()) == 0);
  CHECK(run_cli("plot " + (dir / "out" / "fields.csv").string() + " -o " + (dir / "svg").string()) == 0);
  CHECK(fs::exists(dir / "svg" / "dual_fields.svg"));

  auto big = doc;
  big["load"]["amplitude"] = 1e6;
  write_file(dir / "big.json", big.dump());
  CHECK(run_cli("solve " + (dir / "big.json").string()) == 3);

  auto bad = doc;
  bad["spec"]["R1"] = 0.5;
  write_file(dir / "bad.json", bad.dump());
  CHECK(run_cli("solve " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("validate " + (dir / "bad.json").string()) == 2);

  write_file(dir / "broken.json", "{ \"spec\": ");
  CHECK(run_cli("solve " + (dir / "broken.json").string()) == 2);
  CHECK(run_cli("solve " + (dir / "missing.json").string()) == 2);

  write_file(dir / "empty.csv", "");
  CHECK(run_cli("plot " + (dir / "empty.csv").string()) == 2);
  write_file(dir / "nan.csv", "r,f,G,F,u1,u2,u3,zeta1,zeta2,zeta3\n1,0,0,0,0,0,0,0,0,0\n1.5,nan,0,0,0,0,0,0,0,0\n");
  CHECK(run_cli("plot " + (dir / "nan.csv").string()) == 4);

  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
}
