#include "dwdual/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dwdual/error.hpp"
#include "dwdual/plot.hpp"

namespace dwdual {

using nlohmann::json;

namespace {

constexpr std::array<Branch, 3> kBranches = {Branch::One, Branch::Two, Branch::Three};
constexpr double kBranch1Perturbation = 1e-2;
constexpr double kMultiStartAmplitude = 1e-3;

std::string describe_load_failure(const LoadReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  if (!r.balance_ok) {
    os << "load: balance integral |int f r^(n-1) dr| = " << r.balance_residual
       << " exceeds " << r.balance_tolerance << "; ";
  }
  if (!r.single_zero_ok) {
    os << "load: f must change sign exactly once in (R2, R1), found " << r.sign_changes
       << " sign changes; ";
  }
  if (!r.l1_ok) {
    os << "load: L1 norm " << r.l1_norm << " is not below the bound " << r.l1_bound << "; ";
  }
  auto s = os.str();
  if (s.size() >= 2) s.resize(s.size() - 2);
  return s;
}

DescentSummary summarise(const DescentResult& run, double reference) {
  return {run.initial_energy, run.final_energy, reference, run.iterations, run.converged};
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::MalformedLoad:
    case ErrorKind::DegenerateLoad:
      return 2;
    case ErrorKind::LoadHypothesis:
      return 3;
    default:
      return 4;
  }
}

PipelineResult validate_run(const RunConfig& config) {
  PipelineResult out;
  out.config = config;
  out.spec_report = validate_spec(config.spec);
  if (const auto* bad = out.spec_report.first_failure()) {
    throw Error(ErrorKind::Config, bad->field + ": " + bad->name + " violated (" + bad->detail + ")");
  }
  out.load = build_load(config);
  try {
    out.load_report = validate_load(*out.load, config.spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedLoad) {
      throw Error(ErrorKind::Config, std::string("load.points: ") + e.what());
    }
    throw;
  }
  if (!out.load_report.passed()) {
    throw Error(ErrorKind::LoadHypothesis, describe_load_failure(out.load_report));
  }
  return out;
}

PipelineResult run_pipeline(const RunConfig& config) {
  auto out = validate_run(config);
  const auto& spec = config.spec;
  const auto& load = *out.load;
  const auto grid = RadialGrid::uniform(spec.R2, spec.R1, config.grid_nodes);
  out.stress = compute_F(load, spec, grid);
  const auto& stress = *out.stress;
  if (!stress.certificate().certified()) {
    throw Error(ErrorKind::NumericalFailure, "stress: certificate failed on the computational grid");
  }

  for (Branch b : kBranches) {
    BranchResult br;
    br.branch = b;
    br.zeta = dual_field(stress, b, spec);
    br.profile = displacement(stress, br.zeta, 0.0, spec);
    br.energy = duality_gap(b, br.profile, br.zeta, stress, spec);
    br.constitutive = strain_consistency(br.profile, stress, spec);
    const auto samples = sample(br.profile);
    br.el_direct = el_residual_direct(samples, load, spec);
    br.discrete_energy = discrete_energy(samples, load, spec);
    br.endpoint_strain = {br.profile.strain_values.front(), br.profile.strain_values.back()};
    br.endpoint_limit = b == Branch::Three ? 0.0
                                           : endpoint_strain_limit(b, stress.limit_sign(), spec.lambda);
    auto spectrum = mode_spectrum(br.profile, spec, config.max_mode, config.elements);
    br.classification = classify(spectrum, dual_curvature(br.zeta, spec));
    br.classification.branch = b;
    out.branches.push_back(std::move(br));
  }

  if (config.oracle_enabled) {
    OracleSummary os;
    const auto& b1 = out.branches[0];
    const auto& b2 = out.branches[1];
    const auto& b3 = out.branches[2];

    DiscreteState start1 = sample(b1.profile);
    const auto bump = smooth_perturbation(grid, kBranch1Perturbation, 6, config.oracle_seed);
    for (std::size_t i = 0; i < start1.u_nodes.size(); ++i) start1.u_nodes[i] += bump[i];
    os.from_branch1 = summarise(descend(start1, load, spec), b1.discrete_energy);
    os.from_branch3 = summarise(descend(sample(b3.profile), load, spec), b3.discrete_energy);

    os.starts = config.oracle_starts;
    os.seed = config.oracle_seed;
    os.start_amplitude = kMultiStartAmplitude;
    os.tolerance = kGapTolerance * (1.0 + std::max(std::abs(b1.discrete_energy), std::abs(b2.discrete_energy)));
    if (config.oracle_starts > 0) {
      auto ms = multi_start(grid, load, spec, config.oracle_starts, config.oracle_seed,
                            kMultiStartAmplitude);
      os.converged = ms.converged;
      os.min_energy = ms.min_energy;
      os.max_energy = ms.max_energy;
      const double lo = std::min(b1.discrete_energy, b2.discrete_energy) - os.tolerance;
      const double hi = std::max(b1.discrete_energy, b2.discrete_energy) + os.tolerance;
      for (const auto& run : ms.runs) {
        os.final_energies.push_back(run.final_energy);
        if (run.final_energy >= lo && run.final_energy <= hi) ++os.within_wells;
      }
    }
    out.oracle = std::move(os);
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_report(const PipelineResult& r, const std::string& timestamp) {
  json report;
  report["timestamp"] = timestamp;
  report["config"] = to_json(r.config);

  json checks = json::array();
  for (const auto& c : r.spec_report.checks) {
    checks.push_back({{"name", c.name}, {"field", c.field}, {"passed", c.passed}, {"detail", c.detail}});
  }
  const auto& lr = r.load_report;
  report["validation"] = {
      {"spec", checks},
      {"load",
       {{"balance_residual", lr.balance_residual},
        {"balance_tolerance", lr.balance_tolerance},
        {"balance_ok", lr.balance_ok},
        {"sign_changes", lr.sign_changes},
        {"r3", lr.r3},
        {"single_zero_ok", lr.single_zero_ok},
        {"l1_norm", lr.l1_norm},
        {"l1_bound", lr.l1_bound},
        {"l1_ok", lr.l1_ok}}},
  };

  if (r.stress) {
    const auto& c = r.stress->certificate();
    report["stress"] = {
        {"inner_residual", c.inner_residual},
        {"outer_residual", c.outer_residual},
        {"endpoint_tolerance", c.endpoint_tolerance},
        {"endpoints_ok", c.endpoints_ok},
        {"sign", c.sign},
        {"sign_constant", c.sign_constant},
        {"min_interior_amplitude", c.min_interior_amplitude},
        {"max_interior_amplitude", c.max_interior_amplitude},
        {"critical_amplitude", c.critical},
        {"amplitude_bounded", c.amplitude_bounded},
        {"certified", c.certified()},
    };
  }

  json branches = json::array();
  for (const auto& b : r.branches) {
    json modes = json::array();
    for (const auto& m : b.classification.spectrum.modes) {
      modes.push_back({{"l", m.l}, {"kappa", m.kappa}, {"min", m.min_eigenvalue}, {"max", m.max_eigenvalue}});
    }
    json entry = {
        {"branch", index(b.branch)},
        {"energies",
         {{"primal", b.energy.primal},
          {"dual", b.energy.dual},
          {"total_complementary", b.energy.total_complementary},
          {"gap", b.energy.gap},
          {"gap_tolerance", b.energy.tolerance},
          {"discrete", b.discrete_energy}}},
        {"residuals",
         {{"dae", b.zeta.max_dae_residual},
          {"constitutive", b.constitutive.max_abs},
          {"euler_lagrange_direct", b.el_direct.max_abs}}},
        {"endpoint_strain", {{"inner", b.endpoint_strain[0]}, {"outer", b.endpoint_strain[1]}}},
        {"stability",
         {{"verdict", to_string(b.classification.verdict)},
          {"tolerance", b.classification.tolerance},
          {"scale", b.classification.spectrum.scale},
          {"modes", modes}}},
    };
    if (b.branch != Branch::Three) entry["endpoint_strain"]["limit"] = b.endpoint_limit;
    if (const auto& dc = b.classification.curvature) {
      entry["dual_curvature"] = {{"positive", dc->positive},
                                 {"negative", dc->negative},
                                 {"zero", dc->zero},
                                 {"bracket_sign", dc->bracket_sign},
                                 {"form_sign", dc->form_sign}};
    }
    branches.push_back(std::move(entry));
  }
  report["branches"] = branches;

  if (r.oracle) {
    const auto& o = *r.oracle;
    auto descent = [](const DescentSummary& d) {
      return json{{"start_energy", d.start_energy},
                  {"final_energy", d.final_energy},
                  {"reference_energy", d.reference_energy},
                  {"iterations", d.iterations},
                  {"converged", d.converged}};
    };
    report["oracle"] = {
        {"from_branch1_perturbed", descent(o.from_branch1)},
        {"from_branch3", descent(o.from_branch3)},
        {"multi_start",
         {{"starts", o.starts},
          {"seed", o.seed},
          {"amplitude", o.start_amplitude},
          {"converged", o.converged},
          {"min_energy", o.min_energy},
          {"max_energy", o.max_energy},
          {"within_wells", o.within_wells},
          {"tolerance", o.tolerance},
          {"final_energies", o.final_energies}}},
    };
  } else {
    report["oracle"] = nullptr;
  }
  return report;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  out << buf;
}

}  // namespace

void write_fields_csv(const PipelineResult& r, std::ostream& out) {
  if (!r.stress || r.branches.size() != 3) {
    throw Error(ErrorKind::Internal, "fields.csv: pipeline has not produced the branch fields");
  }
  const auto& s = *r.stress;
  out << "r,f,G,F,sigma_norm_sq,zeta1,zeta2,zeta3,u1,u2,u3,strain1,strain2,strain3\n";
  for (std::size_t i = 0; i < s.grid().size(); ++i) {
    const double rr = s.grid()[i];
    const std::array<double, 5> head = {rr, s.load()(rr), s.G_values()[i], s.F_values()[i],
                                        s.amplitude_values()[i]};
    bool first = true;
    for (double v : head) {
      if (!first) out << ',';
      first = false;
      put(out, v);
    }
    for (const auto& b : r.branches) { out << ','; put(out, b.zeta.zeta_values[i]); }
    for (const auto& b : r.branches) { out << ','; put(out, b.profile.u_values[i]); }
    for (const auto& b : r.branches) { out << ','; put(out, b.profile.strain_values[i]); }
    out << '\n';
  }
}

void write_modes_csv(const PipelineResult& r, std::ostream& out) {
  out << "branch,l,kappa,min_eigenvalue,max_eigenvalue\n";
  for (const auto& b : r.branches) {
    for (const auto& m : b.classification.spectrum.modes) {
      out << index(b.branch) << ',' << m.l << ',';
      put(out, m.kappa);
      out << ',';
      put(out, m.min_eigenvalue);
      out << ',';
      put(out, m.max_eigenvalue);
      out << '\n';
    }
  }
}

void write_summary(const PipelineResult& r, std::ostream& out) {
  const auto& sp = r.config.spec;
  out << "annulus " << sp.R2 << " < r < " << sp.R1 << " in R^" << sp.n << ", nu = " << sp.nu
      << ", lambda = " << sp.lambda << '\n';
  const auto& lr = r.load_report;
  out << std::setprecision(6) << "load: r3 = " << lr.r3 << ", ||f||_1 = " << lr.l1_norm
      << " < " << lr.l1_bound << ", balance " << lr.balance_residual << '\n';
  if (r.stress) {
    const auto& c = r.stress->certificate();
    out << "stress: max A = " << c.max_interior_amplitude << " < " << c.critical
        << ", sign(F) = " << c.sign << '\n';
  }
  for (const auto& b : r.branches) {
    out << "branch " << index(b.branch) << ": I = " << std::setprecision(12) << b.energy.primal
        << ", I_d = " << b.energy.dual << std::setprecision(3) << ", gap = " << b.energy.gap
        << ", EL = " << b.constitutive.max_abs << ", " << to_string(b.classification.verdict) << '\n';
  }
  if (r.oracle) {
    const auto& o = *r.oracle;
    out << std::setprecision(12) << "oracle: branch 1 descent " << o.from_branch1.final_energy
        << " (ref " << o.from_branch1.reference_energy << "), branch 3 descent "
        << o.from_branch3.start_energy << " -> " << o.from_branch3.final_energy << '\n';
    if (o.starts > 0) {
      out << "oracle: " << o.converged << "/" << o.starts << " starts converged, energies in ["
          << o.min_energy << ", " << o.max_energy << "]\n";
    }
  }
}

std::vector<std::filesystem::path> write_artifacts(const PipelineResult& r,
                                                   const std::filesystem::path& dir,
                                                   const std::string& timestamp) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& name) {
    const auto path = dir / name;
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Config, "output.directory: cannot write " + path.string());
    written.push_back(path);
    return f;
  };
  const auto& cfg = r.config;
  if (cfg.wants("csv") || cfg.wants("plots")) {
    auto f = open("fields.csv");
    write_fields_csv(r, f);
  }
  if (cfg.wants("json")) {
    auto f = open("report.json");
    f << make_report(r, timestamp).dump(2) << '\n';
  }
  if (cfg.wants("modes")) {
    auto f = open("modes.csv");
    write_modes_csv(r, f);
  }
  if (cfg.wants("plots")) {
    for (auto& p : emit_profile_plots(dir / "fields.csv", dir)) written.push_back(p);
  }
  return written;
}

// ---- re-ingest -------------------------------------------------------------

bool FieldTable::has(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<double> FieldTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorKind::Config, "fields.csv: missing column \"" + name + "\"");
  const auto j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

FieldTable read_fields_csv(std::istream& in) {
  FieldTable t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw Error(ErrorKind::Config, "fields.csv: empty file, header row required");
  }
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(cell, &used);
      } catch (const std::out_of_range&) {
        v = HUGE_VAL;
      } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::Config, "fields.csv: row " + std::to_string(row_no) +
                                           ": not a number: \"" + cell + "\"");
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::NumericalFailure,
                    "fields.csv: row " + std::to_string(row_no) + ", column \"" +
                        (row.size() < t.columns.size() ? t.columns[row.size()] : std::string("?")) +
                        "\": non-finite value \"" + cell + "\"");
      }
      row.push_back(v);
    }
    if (row.size() != t.columns.size()) {
      throw Error(ErrorKind::Config, "fields.csv: row " + std::to_string(row_no) + " has " +
                                         std::to_string(row.size()) + " values, header has " +
                                         std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw Error(ErrorKind::Config, "fields.csv: no data rows");
  return t;
}

FieldTable read_fields_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, path.string() + ": cannot open");
  return read_fields_csv(in);
}

namespace {

// Composite Simpson on a uniform grid; a 3/8 panel closes an odd interval count.
double simpson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size() - 1;
  if (m < 2) throw Error(ErrorKind::Domain, "simpson: at least three rows required");
  const double h = (x.back() - x.front()) / static_cast<double>(m);
  const std::size_t even = (m % 2 == 0) ? m : m - 3;
  long double sum = 0.0L;
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    sum += static_cast<long double>(h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]));
  }
  if (even != m) {
    const std::size_t i = even;
    sum += static_cast<long double>(3.0 * h / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]));
  }
  return static_cast<double>(sum);
}

}  // namespace

FieldEnergies energies_from_fields(const FieldTable& t, const ProblemSpec& spec) {
  const auto r = t.column("r");
  const auto f = t.column("f");
  const auto A = t.column("sigma_norm_sq");
  const double omega = spec.omega();
  const double switch_amplitude = kSwitchFraction * critical_amplitude(spec.nu, spec.lambda);
  FieldEnergies out;
  for (int b = 0; b < 3; ++b) {
    const auto id = std::to_string(b + 1);
    const auto u = t.column("u" + id);
    const auto s = t.column("strain" + id);
    const auto z = t.column("zeta" + id);
    std::vector<double> primal(r.size()), dual(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double w = omega * spec.radial_weight(r[i]);
      const double xi = 0.5 * s[i] * s[i] - spec.lambda;
      primal[i] = (0.5 * spec.nu * xi * xi - f[i] * u[i]) * w;
      const double a_over_z = A[i] < switch_amplitude ? 2.0 * z[i] * (spec.lambda + z[i] / spec.nu)
                                                       : A[i] / z[i];
      dual[i] = -0.5 * (a_over_z + 2.0 * spec.lambda * z[i] + z[i] * z[i] / spec.nu) * w;
    }
    out.primal[static_cast<std::size_t>(b)] = simpson(r, primal);
    out.dual[static_cast<std::size_t>(b)] = simpson(r, dual);
  }
  return out;
}

}  // namespace dwdual
