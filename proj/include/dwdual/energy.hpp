#pragma once

// Primal functional I, total complementary functional Xi and pure
// complementary functional I_d, all reduced to radial integrals
// int_Omega (.) dx = omega int_{R2}^{R1} (.) r^{n-1} dr.

#include <optional>

#include "dwdual/fields.hpp"

namespace dwdual {

/// Double-well density H = nu/2 (xi - lambda)^2 with xi = s^2/2.
double double_well(double strain, const ProblemSpec& spec);

/// I[u] = int_Omega ( H(|grad u|) - f u ) dx
double primal_energy(const CriticalPoint& cp, const LoadFunction& load, const ProblemSpec& spec);

/// I_d[zeta] = -1/2 int_Omega ( |sigma|^2/zeta + 2 lambda zeta + zeta^2/nu ) dx.
/// Where A is below the switch amplitude, |sigma|^2/zeta is replaced by the
/// equivalent 2 zeta (lambda + zeta/nu).
double dual_energy(const DualBranchField& zeta, const RadialStress& stress, const ProblemSpec& spec);

/// Xi(u, zeta) = int_Omega ( Phi(u) zeta - Psi*(zeta) - f u ) dx with
/// Phi(u) = |grad u|^2 / 2 and Psi*(zeta) = zeta^2/(2 nu) + lambda zeta.
double total_complementary(const CriticalPoint& cp, const DualBranchField& zeta,
                           const LoadFunction& load, const ProblemSpec& spec);

struct EnergyReport {
  Branch branch = Branch::One;
  double primal = 0.0;
  double dual = 0.0;
  double total_complementary = 0.0;
  double gap = 0.0;  // |primal - dual|
  double tolerance = 0.0;
};

inline constexpr double kGapTolerance = 1e-7;  // scaled by (1 + |primal|)

/// Evaluates the three functionals for one branch. Throws NoGapViolation if
/// the gap exceeds kGapTolerance (1 + |primal|).
EnergyReport duality_gap(Branch branch, const CriticalPoint& cp, const DualBranchField& zeta,
                         const RadialStress& stress, const ProblemSpec& spec);

}  // namespace dwdual
