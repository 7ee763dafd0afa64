#include "dwdual/energy.hpp"

#include <cmath>
#include <sstream>

#include "dwdual/error.hpp"
#include "dwdual/quadrature.hpp"

namespace dwdual {

double double_well(double strain, const ProblemSpec& spec) {
  const double d = 0.5 * strain * strain - spec.lambda;
  return 0.5 * spec.nu * d * d;
}

namespace {

// omega * sum over cells of the 4-point rule applied to density(r) r^{n-1}.
template <class Density>
double radial_integral(const RadialGrid& grid, const ProblemSpec& spec, Density&& density,
                       std::span<const double> breakpoints = {}) {
  return spec.omega() *
         quad::integrate([&](double r) { return density(r) * spec.radial_weight(r); },
                         grid.nodes(), breakpoints);
}

}  // namespace

double primal_energy(const CriticalPoint& cp, const LoadFunction& load, const ProblemSpec& spec) {
  return radial_integral(
      cp.grid, spec,
      [&](double r) { return double_well(cp.strain_at(r), spec) - load(r) * cp.u_at(r); },
      load.breakpoints());
}

double dual_energy(const DualBranchField& zeta, const RadialStress& stress, const ProblemSpec& spec) {
  const double nu = spec.nu;
  const double lambda = spec.lambda;
  const double switch_amplitude = kSwitchFraction * critical_amplitude(nu, lambda);
  return radial_integral(zeta.grid, spec, [&](double r) {
    const double z = zeta.zeta_at(r);
    const double A = stress.amplitude_at(r);
    const double ratio = (A < switch_amplitude) ? 2.0 * z * (lambda + z / nu) : A / z;
    return -0.5 * (ratio + 2.0 * lambda * z + z * z / nu);
  });
}

double total_complementary(const CriticalPoint& cp, const DualBranchField& zeta,
                           const LoadFunction& load, const ProblemSpec& spec) {
  return radial_integral(
      cp.grid, spec,
      [&](double r) {
        const double s = cp.strain_at(r);
        const double z = zeta.zeta_at(r);
        const double conjugate = z * z / (2.0 * spec.nu) + spec.lambda * z;
        return 0.5 * s * s * z - conjugate - load(r) * cp.u_at(r);
      },
      load.breakpoints());
}

EnergyReport duality_gap(Branch branch, const CriticalPoint& cp, const DualBranchField& zeta,
                         const RadialStress& stress, const ProblemSpec& spec) {
  EnergyReport report;
  report.branch = branch;
  report.primal = primal_energy(cp, stress.load(), spec);
  report.dual = dual_energy(zeta, stress, spec);
  report.total_complementary = total_complementary(cp, zeta, stress.load(), spec);
  report.gap = std::abs(report.primal - report.dual);
  report.tolerance = kGapTolerance * (1.0 + std::abs(report.primal));
  if (!(report.gap <= report.tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "duality gap on branch " << index(branch) << ": |I - I_d| = " << report.gap
       << " exceeds " << report.tolerance;
    throw Error(ErrorKind::NoGapViolation, os.str());
  }
  return report;
}

}  // namespace dwdual
