#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "dwdual/energy.hpp"
#include "dwdual/fields.hpp"

namespace testing {

inline dwdual::ProblemSpec reference_spec(int n = 2) { return {1.0, 1.0, 2.0, 1.0, n}; }

struct Instance {
  dwdual::ProblemSpec spec;
  dwdual::LoadFunction load;
  dwdual::RadialStress stress;

  dwdual::DualBranchField zeta(dwdual::Branch b) const { return dwdual::dual_field(stress, b, spec); }
  dwdual::CriticalPoint profile(dwdual::Branch b, double C = 0.0) const {
    return dwdual::displacement(stress, zeta(b), C, spec);
  }
};

inline Instance make_instance(const dwdual::ProblemSpec& spec, double a, std::size_t nodes) {
  auto load = dwdual::balanced_linear_load(spec, a);
  auto grid = dwdual::RadialGrid::uniform(spec.R2, spec.R1, nodes);
  auto stress = dwdual::compute_F(load, spec, grid);
  return {spec, load, stress};
}

inline Instance reference_instance(std::size_t nodes = 2001, int n = 2) {
  return make_instance(reference_spec(n), 0.2, nodes);
}

/// Plain bisection on a bracketing interval.
inline double bisect(const std::function<double(double)>& g, double lo, double hi, double tol = 1e-15) {
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Composite Simpson with m (even) panels.
inline double simpson(const std::function<double(double)>& g, double a, double b, int m = 4000) {
  const double h = (b - a) / m;
  double s = g(a) + g(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

}  // namespace testing
