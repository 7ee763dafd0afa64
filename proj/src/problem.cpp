#include "dwdual/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dwdual/error.hpp"
#include "dwdual/quadrature.hpp"

namespace dwdual {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DegenerateLoad: return "degenerate-load";
    case ErrorKind::MalformedLoad: return "malformed-load";
    case ErrorKind::NegativeAmplitude: return "negative-amplitude";
    case ErrorKind::AmplitudeOverflow: return "amplitude-overflow";
    case ErrorKind::Uncertified: return "uncertified";
    case ErrorKind::NoGapViolation: return "no-gap-violation";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::Config: return "config";
    case ErrorKind::LoadHypothesis: return "load-hypothesis";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

double ProblemSpec::omega() const { return sphere_area(n); }

double ProblemSpec::radial_weight(double r) const { return std::pow(r, n - 1); }

double ProblemSpec::volume() const {
  // V_n(R) = pi^{n/2} R^n / Gamma(n/2 + 1)
  const double unit_ball = std::pow(std::numbers::pi, 0.5 * n) / gamma_half_integer(n + 2);
  return unit_ball * (std::pow(R1, n) - std::pow(R2, n));
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const HypothesisCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

namespace {

std::string describe(const char* label, double value) {
  std::ostringstream os;
  os.precision(17);
  os << label << " = " << value;
  return os.str();
}

}  // namespace

ValidationReport validate_spec(const ProblemSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string name, std::string field, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), std::move(field), ok, std::move(detail)});
  };
  add("nu > 0", "spec.nu", std::isfinite(spec.nu) && spec.nu > 0.0, describe("nu", spec.nu));
  add("lambda > 0", "spec.lambda", std::isfinite(spec.lambda) && spec.lambda > 0.0,
      describe("lambda", spec.lambda));
  add("R2 > 0", "spec.R2", std::isfinite(spec.R2) && spec.R2 > 0.0, describe("R2", spec.R2));
  add("R1 > R2", "spec.R1", std::isfinite(spec.R1) && spec.R1 > spec.R2,
      describe("R1", spec.R1) + ", " + describe("R2", spec.R2));
  add("n >= 1", "spec.n", spec.n >= 1, "n = " + std::to_string(spec.n));
  return report;
}

double gamma_half_integer(int m) {
  if (m <= 0) {
    throw Error(ErrorKind::Domain, "gamma_half_integer: m must be >= 1, got " + std::to_string(m));
  }
  // Gamma(x + 1) = x Gamma(x), starting from Gamma(1/2) or Gamma(1).
  double value = (m % 2 == 1) ? std::sqrt(std::numbers::pi) : 1.0;
  for (int k = (m % 2 == 1) ? 1 : 2; k < m; k += 2) {
    value *= 0.5 * k;
  }
  return value;
}

double sphere_area(int n) {
  if (n < 1) {
    throw Error(ErrorKind::Domain, "sphere_area: n must be >= 1");
  }
  if (n == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_half_integer(n);
}

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) {
    throw Error(ErrorKind::Domain, "RadialGrid: need at least 3 nodes");
  }
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i + 1] > nodes_[i])) {
      throw Error(ErrorKind::Domain, "RadialGrid: nodes must be strictly increasing");
    }
  }
}

RadialGrid RadialGrid::uniform(double a, double b, std::size_t count) {
  if (count < 3 || !(b > a)) {
    throw Error(ErrorKind::Domain, "RadialGrid::uniform: need count >= 3 and b > a");
  }
  std::vector<double> nodes(count);
  const double h = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) nodes[i] = a + h * static_cast<double>(i);
  nodes.back() = b;
  return RadialGrid(std::move(nodes));
}

std::size_t RadialGrid::cell_of(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  if (it == nodes_.begin()) return 0;
  const auto j = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
  return std::min(j, nodes_.size() - 2);
}

LoadFunction LoadFunction::linear(double amplitude, double r3) {
  LoadFunction load;
  load.kind_ = LoadKind::BuiltinLinear;
  load.amplitude_ = amplitude;
  load.r3_ = r3;
  load.breakpoints_ = {r3};
  return load;
}

LoadFunction LoadFunction::tabulated(std::vector<LoadSample> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::MalformedLoad, "tabulated load needs at least 2 samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].r) || !std::isfinite(samples[i].f)) {
      throw Error(ErrorKind::MalformedLoad,
                  "tabulated load sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(samples[i].r > samples[i - 1].r)) {
      throw Error(ErrorKind::MalformedLoad,
                  "tabulated load radii must be strictly increasing (sample " +
                      std::to_string(i) + ")");
    }
  }
  LoadFunction load;
  load.kind_ = LoadKind::Tabulated;
  load.r3_ = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    if ((a.f > 0.0 && b.f < 0.0) || (a.f < 0.0 && b.f > 0.0)) {
      load.r3_ = a.r + (b.r - a.r) * a.f / (a.f - b.f);
      break;
    }
    if (b.f == 0.0 && i + 2 < samples.size()) {
      load.r3_ = b.r;
      break;
    }
  }
  for (const auto& s : samples) load.breakpoints_.push_back(s.r);
  if (std::isfinite(load.r3_)) {
    load.breakpoints_.push_back(load.r3_);
    std::sort(load.breakpoints_.begin(), load.breakpoints_.end());
  }
  load.samples_ = std::move(samples);
  return load;
}

LoadFunction LoadFunction::zero(const ProblemSpec& spec) {
  return tabulated({{spec.R2, 0.0}, {spec.R1, 0.0}});
}

double LoadFunction::operator()(double r) const {
  if (kind_ == LoadKind::BuiltinLinear) {
    return amplitude_ * (r3_ - r);
  }
  if (r <= samples_.front().r) return samples_.front().f;
  if (r >= samples_.back().r) return samples_.back().f;
  auto it = std::upper_bound(samples_.begin(), samples_.end(), r,
                             [](double x, const LoadSample& s) { return x < s.r; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = (r - a.r) / (b.r - a.r);
  return a.f + t * (b.f - a.f);
}

bool LoadFunction::is_identically_zero() const {
  if (kind_ == LoadKind::BuiltinLinear) return amplitude_ == 0.0;
  return std::all_of(samples_.begin(), samples_.end(), [](const auto& s) { return s.f == 0.0; });
}

LoadFunction balanced_linear_load(const ProblemSpec& spec, double amplitude) {
  if (amplitude == 0.0 || !std::isfinite(amplitude)) {
    throw Error(ErrorKind::DegenerateLoad, "balanced_linear_load: amplitude must be nonzero");
  }
  const int n = spec.n;
  const double r3 = (static_cast<double>(n) / (n + 1)) *
                    (std::pow(spec.R1, n + 1) - std::pow(spec.R2, n + 1)) /
                    (std::pow(spec.R1, n) - std::pow(spec.R2, n));
  return LoadFunction::linear(amplitude, r3);
}

double l1_bound(const ProblemSpec& spec) {
  const double pi = std::numbers::pi;
  const int n = spec.n;
  return 4.0 * spec.lambda * spec.nu * std::pow(spec.R2, n - 1) *
         std::sqrt(2.0 * spec.lambda * std::pow(pi, n)) /
         (3.0 * std::sqrt(3.0) * gamma_half_integer(n));
}

namespace {

constexpr std::size_t kBalanceCells = 512;
constexpr std::size_t kSignSamples = 20000;

std::vector<double> merged_breakpoints(const LoadFunction& load, double extra) {
  std::vector<double> bps(load.breakpoints().begin(), load.breakpoints().end());
  if (std::isfinite(extra)) bps.push_back(extra);
  std::sort(bps.begin(), bps.end());
  return bps;
}

}  // namespace

LoadReport validate_load(const LoadFunction& load, const ProblemSpec& spec) {
  if (load.kind() == LoadKind::Tabulated) {
    const auto s = load.samples();
    const double tol = 1e-12 * std::max(1.0, spec.R1);
    if (std::abs(s.front().r - spec.R2) > tol || std::abs(s.back().r - spec.R1) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "tabulated load must span [R2, R1] = [" << spec.R2 << ", " << spec.R1
         << "], got [" << s.front().r << ", " << s.back().r << "]";
      throw Error(ErrorKind::MalformedLoad, os.str());
    }
  }

  LoadReport report;
  const auto grid = RadialGrid::uniform(spec.R2, spec.R1, kBalanceCells + 1);
  const auto bps = merged_breakpoints(load, load.r3());

  const double balance = quad::integrate(
      [&](double r) { return load(r) * spec.radial_weight(r); }, grid.nodes(), bps);
  report.balance_residual = std::abs(balance);
  report.balance_ok = report.balance_residual <= report.balance_tolerance;

  // Single interior zero: nonzero at both ends, exactly one sign change, and
  // no zero samples other than (at most) one at the crossing.
  int changes = 0;
  int zero_hits = 0;
  int last_sign = 0;
  bool endpoints_nonzero = load(spec.R2) != 0.0 && load(spec.R1) != 0.0;
  for (std::size_t i = 0; i <= kSignSamples; ++i) {
    const double r = spec.R2 + (spec.R1 - spec.R2) * static_cast<double>(i) / kSignSamples;
    const double v = load(r);
    const int sign = (v > 0.0) - (v < 0.0);
    if (sign == 0) {
      ++zero_hits;
      continue;
    }
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  report.sign_changes = changes;
  report.r3 = load.r3();
  report.single_zero_ok = endpoints_nonzero && changes == 1 && zero_hits <= 1 &&
                          std::isfinite(report.r3) && report.r3 > spec.R2 && report.r3 < spec.R1;

  report.l1_norm =
      spec.omega() * quad::integrate([&](double r) { return std::abs(load(r)) * spec.radial_weight(r); },
                                     grid.nodes(), bps);
  report.l1_bound = l1_bound(spec);
  report.l1_ok = report.l1_norm < report.l1_bound;
  return report;
}

}  // namespace dwdual
