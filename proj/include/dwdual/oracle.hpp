#pragma once

// Direct discretisation of I[u] on the radial grid, independent of the
// canonical-duality pipeline: midpoint strains per cell, a consistent load
// vector, and a conservative finite-difference form of the Euler-Lagrange
// equation.

#include <cstdint>
#include <vector>

#include "dwdual/fields.hpp"

namespace dwdual {

struct DiscreteState {
  RadialGrid grid;
  std::vector<double> u_nodes;
};

/// Nodal samples of a profile.
DiscreteState sample(const CriticalPoint& cp);

/// Consistent load vector b_j = int_Omega f phi_j dx for the hat functions
/// phi_j; sum_j b_j = int_Omega f dx, so balanced loads stay balanced.
std::vector<double> load_vector(const RadialGrid& grid, const LoadFunction& load,
                                const ProblemSpec& spec);

/// sum_cells nu/2 (d^2/2 - lambda)^2 omega r_mid^{n-1} dr - sum_j b_j u_j,
/// d = (u_{j+1} - u_j)/dr.
double discrete_energy(const DiscreteState& state, const LoadFunction& load, const ProblemSpec& spec);

/// Exact gradient of discrete_energy with respect to the nodal values.
std::vector<double> discrete_gradient(const DiscreteState& state, const LoadFunction& load,
                                      const ProblemSpec& spec);

struct DescentControls {
  int max_iterations = 20000;
  double gradient_tolerance = 1e-8;  // max-norm of the nodal gradient
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct DescentResult {
  DiscreteState state;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // line search could not decrease the energy any further
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double final_gradient_norm = 0.0;
  std::vector<double> energy_history;  // energy after every accepted step
};

/// Gradient flow with Armijo backtracking. The step direction is the gradient
/// taken in a weighted H1 metric (a fixed tridiagonal Gram matrix), which
/// keeps the iteration count independent of the grid. No boundary condition
/// is imposed; the Neumann condition is natural.
DescentResult descend(const DiscreteState& start, const LoadFunction& load, const ProblemSpec& spec,
                      const DescentControls& controls = {});

/// Per-node residual of d/dr[ r^{n-1} nu (u'^2/2 - lambda) u' ] + f r^{n-1};
/// endpoints carry 0.
ResidualField el_residual_direct(const DiscreteState& state, const LoadFunction& load,
                                 const ProblemSpec& spec);

/// Smooth cosine perturbation sum_{k=1}^{modes} c_k cos(k pi (r - R2)/(R1 - R2)),
/// random c_k, rescaled so its max-norm equals `amplitude`.
std::vector<double> smooth_perturbation(const RadialGrid& grid, double amplitude, int modes,
                                        std::uint64_t seed);

/// Subtract the nodal mean (energies are invariant under constants).
std::vector<double> remove_mean(std::vector<double> u);

struct MultiStartSummary {
  std::vector<DescentResult> runs;
  int converged = 0;
  double min_energy = 0.0;
  double max_energy = 0.0;
};

/// Descents from `starts` random smooth states of max-norm `amplitude`.
MultiStartSummary multi_start(const RadialGrid& grid, const LoadFunction& load,
                              const ProblemSpec& spec, int starts, std::uint64_t seed,
                              double amplitude, const DescentControls& controls = {});

}  // namespace dwdual
