#include "dwdual/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "dwdual/error.hpp"
#include "dwdual/quadrature.hpp"

namespace dwdual {

RadialStress::RadialStress(ProblemSpec spec, LoadFunction load, RadialGrid grid)
    : spec_(spec), load_(std::move(load)), grid_(std::move(grid)) {}

double RadialStress::G_at(double r) const {
  const std::size_t j = grid_.cell_of(r);
  const double rj = grid_[j];
  if (r == rj) return G_[j];
  return G_[j] + quad::gauss_legendre(
                     [this](double x) { return load_(x) * spec_.radial_weight(x); }, rj, r,
                     load_.breakpoints());
}

double RadialStress::F_at(double r) const { return -G_at(r) / std::pow(r, spec_.n); }

double RadialStress::amplitude_at(double r) const {
  if (is_endpoint(r)) return 0.0;
  const double s = F_at(r) * r;
  return s * s;
}

RadialStress compute_F(const LoadFunction& load, const ProblemSpec& spec, const RadialGrid& grid,
                       StressOptions options) {
  RadialStress out(spec, load, grid);
  auto& cert = out.cert_;
  cert.critical = critical_amplitude(spec.nu, spec.lambda);

  if (load.is_identically_zero()) {
    if (!options.allow_zero_load) {
      throw Error(ErrorKind::DegenerateLoad, "compute_F: load is identically zero");
    }
    const std::size_t N = grid.size();
    out.G_.assign(N, 0.0);
    out.F_.assign(N, 0.0);
    out.A_.assign(N, 0.0);
    cert.degenerate = true;
    cert.endpoints_ok = true;
    return out;
  }

  out.G_ = quad::cumulative([&](double x) { return load(x) * spec.radial_weight(x); }, grid.nodes(),
                            load.breakpoints());
  const std::size_t N = grid.size();
  out.F_.resize(N);
  out.A_.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = grid[i];
    out.F_[i] = -out.G_[i] / std::pow(r, spec.n);
    const double s = out.F_[i] * r;
    out.A_[i] = s * s;
  }

  cert.inner_residual = std::abs(out.F_.front());
  cert.outer_residual = std::abs(out.F_.back());
  cert.endpoints_ok = cert.inner_residual <= cert.endpoint_tolerance &&
                      cert.outer_residual <= cert.endpoint_tolerance;

  // Interior sign: the sign at the node of largest |F|, then check constancy.
  std::size_t peak = 1;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    if (std::abs(out.F_[i]) > std::abs(out.F_[peak])) peak = i;
  }
  cert.sign = (out.F_[peak] > 0.0) - (out.F_[peak] < 0.0);
  cert.sign_constant = cert.sign != 0;
  cert.min_interior_amplitude = std::numeric_limits<double>::infinity();
  cert.max_interior_amplitude = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const int s = (out.F_[i] > 0.0) - (out.F_[i] < 0.0);
    if (s != cert.sign) cert.sign_constant = false;
    cert.min_interior_amplitude = std::min(cert.min_interior_amplitude, out.A_[i]);
    cert.max_interior_amplitude = std::max(cert.max_interior_amplitude, out.A_[i]);
  }
  if (cert.max_interior_amplitude >= cert.critical) {
    std::ostringstream os;
    os.precision(17);
    os << "compute_F: F^2 r^2 reaches " << cert.max_interior_amplitude
       << " >= critical amplitude " << cert.critical
       << " inside the annulus (L1 smallness hypothesis failed)";
    throw Error(ErrorKind::AmplitudeOverflow, os.str());
  }
  cert.amplitude_bounded = cert.min_interior_amplitude > 0.0;
  return out;
}

double endpoint_strain_limit(Branch branch, int sign, double lambda) {
  const double w = std::sqrt(2.0 * lambda);
  switch (branch) {
    case Branch::One: return sign * w;
    case Branch::Two: return -sign * w;
    case Branch::Three: return 0.0;
  }
  return 0.0;
}

namespace {

void require_certified(const RadialStress& stress) {
  if (!stress.certificate().certified()) {
    throw Error(ErrorKind::Uncertified,
                "radial stress failed certification (endpoint values, constant sign or "
                "amplitude bound)");
  }
}

double zeta_from(const RadialStress& stress, Branch branch, double r) {
  const auto& spec = stress.spec();
  return branch_root(stress.amplitude_at(r), branch, spec.nu, spec.lambda);
}

// Branch 1/2 strain for A below the switch: zeta ~ +-|s|/sqrt(2 lambda) - s^2/(4 lambda^2 nu).
double near_zero_strain(Branch branch, int sign, double abs_s, double nu, double lambda) {
  const double c0 = 1.0 / std::sqrt(2.0 * lambda);
  const double c1 = abs_s / (4.0 * lambda * lambda * nu);
  return branch == Branch::One ? sign / (c0 - c1) : -sign / (c0 + c1);
}

}  // namespace

DualBranchField dual_field(const RadialStress& stress, Branch branch, const ProblemSpec& spec) {
  require_certified(stress);
  auto shared = std::make_shared<const RadialStress>(stress);
  DualBranchField out;
  out.branch = branch;
  out.grid = stress.grid();
  out.zeta_at = [shared, branch](double r) { return zeta_from(*shared, branch, r); };
  const auto& A = stress.amplitude_values();
  out.zeta_values.resize(out.grid.size());
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const double r = out.grid[i];
    out.zeta_values[i] = out.zeta_at(r);
    const double a = stress.is_endpoint(r) ? 0.0 : A[i];
    const double res = std::abs(evaluate_E(out.zeta_values[i], spec.nu, spec.lambda) - a);
    out.max_dae_residual = std::max(out.max_dae_residual, res / std::max(1.0, a));
  }
  return out;
}

double CriticalPoint::u_at(double r) const {
  const std::size_t j = grid.cell_of(r);
  const double rj = grid[j];
  if (r == rj) return u_values[j];
  return u_values[j] + quad::gauss_legendre(strain_at, rj, r);
}

CriticalPoint CriticalPoint::shifted(double c) const {
  CriticalPoint out = *this;
  for (auto& u : out.u_values) u += c;
  out.constant += c;
  return out;
}

CriticalPoint CriticalPoint::from_strain(RadialGrid grid, std::function<double(double)> strain,
                                         double C, std::optional<Branch> branch) {
  CriticalPoint out;
  out.branch = branch;
  out.constant = C;
  out.strain_at = std::move(strain);
  out.u_values = quad::cumulative(out.strain_at, grid.nodes());
  for (auto& u : out.u_values) u += C;
  out.strain_values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.strain_values[i] = out.strain_at(grid[i]);
  out.grid = std::move(grid);
  return out;
}

CriticalPoint displacement(const RadialStress& stress, const DualBranchField& zeta, double C,
                           const ProblemSpec& spec) {
  require_certified(stress);
  if (!(zeta.grid == stress.grid())) {
    throw Error(ErrorKind::Domain, "displacement: stress and dual field grids differ");
  }
  auto shared = std::make_shared<const RadialStress>(stress);
  const Branch branch = zeta.branch;
  const double nu = spec.nu;
  const double lambda = spec.lambda;
  const double switch_amplitude = kSwitchFraction * critical_amplitude(nu, lambda);
  auto zeta_at = zeta.zeta_at;
  auto strain = [shared, branch, zeta_at, nu, lambda, switch_amplitude](double r) {
    const int sign = shared->limit_sign();
    const double A = shared->amplitude_at(r);
    if (branch == Branch::Three) {
      return shared->F_at(r) * r / zeta_at(r);
    }
    // Use the interior sign of F: at the endpoints F r is rounding noise.
    const double abs_s = std::sqrt(A);
    if (A < switch_amplitude) {
      return near_zero_strain(branch, sign, abs_s, nu, lambda);
    }
    const double z = zeta_at(r);
    if (z == 0.0) {
      throw Error(ErrorKind::Internal, "displacement: zero dual stress above the switch amplitude");
    }
    return sign * abs_s / z;
  };
  return CriticalPoint::from_strain(stress.grid(), strain, C, branch);
}

ResidualField strain_consistency(const CriticalPoint& cp, const RadialStress& stress,
                                 const ProblemSpec& spec) {
  ResidualField out;
  out.values.resize(cp.grid.size());
  for (std::size_t i = 0; i < cp.grid.size(); ++i) {
    const double s = cp.strain_values[i];
    const double fr = stress.F_values()[i] * cp.grid[i];
    out.values[i] = spec.nu * (0.5 * s * s - spec.lambda) * s - fr;
    out.max_abs = std::max(out.max_abs, std::abs(out.values[i]));
  }
  return out;
}

}  // namespace dwdual
