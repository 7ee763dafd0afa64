#include "dwdual/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <span>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "dwdual/error.hpp"
#include "dwdual/quadrature.hpp"

namespace dwdual {

DiscreteState sample(const CriticalPoint& cp) { return {cp.grid, cp.u_values}; }

namespace {

// omega r_mid^{n-1} dr per cell.
std::vector<double> cell_weights(const RadialGrid& grid, const ProblemSpec& spec) {
  std::vector<double> w(grid.size() - 1);
  const double omega = spec.omega();
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double mid = 0.5 * (grid[c] + grid[c + 1]);
    w[c] = omega * spec.radial_weight(mid) * (grid[c + 1] - grid[c]);
  }
  return w;
}

std::vector<double> load_vector_impl(const RadialGrid& grid, const LoadFunction& load,
                                     const ProblemSpec& spec) {
  std::vector<double> b(grid.size(), 0.0);
  const double omega = spec.omega();
  const auto kinks = load.breakpoints();
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double a = grid[c], e = grid[c + 1], dr = e - a;
    auto weighted = [&](double r) { return load(r) * omega * spec.radial_weight(r); };
    b[c] += quad::gauss_legendre([&](double r) { return weighted(r) * (e - r) / dr; }, a, e, kinks);
    b[c + 1] += quad::gauss_legendre([&](double r) { return weighted(r) * (r - a) / dr; }, a, e, kinks);
  }
  return b;
}

double flux(double d, const ProblemSpec& spec) { return spec.nu * (0.5 * d * d - spec.lambda) * d; }

void check_state(const DiscreteState& state) {
  if (state.u_nodes.size() != state.grid.size()) {
    throw Error(ErrorKind::Domain, "discrete state: node count does not match the grid");
  }
}

// E(u + delta) - E(u) accumulated cell by cell from the increment, so small
// changes are not lost to cancellation against the total energy.
double energy_change(const DiscreteState& state, std::span<const double> delta,
                     std::span<const double> weights, std::span<const double> loads,
                     const ProblemSpec& spec) {
  const auto& g = state.grid;
  const auto& u = state.u_nodes;
  long double sum = 0.0L;
  for (std::size_t c = 0; c + 1 < g.size(); ++c) {
    const double dr = g[c + 1] - g[c];
    const double d0 = (u[c + 1] - u[c]) / dr;
    const double dd = (delta[c + 1] - delta[c]) / dr;
    const double d1 = d0 + dd;
    // well(d1) - well(d0) = (d1^2 - d0^2)/2 = dd (d0 + d1)/2
    const double well0 = 0.5 * d0 * d0 - spec.lambda;
    const double dwell = 0.5 * dd * (d0 + d1);
    const double well1 = well0 + dwell;
    sum += static_cast<long double>(0.5 * spec.nu * dwell * (well0 + well1) * weights[c]);
  }
  for (std::size_t j = 0; j < g.size(); ++j) sum -= static_cast<long double>(loads[j] * delta[j]);
  return static_cast<double>(sum);
}

}  // namespace

std::vector<double> load_vector(const RadialGrid& grid, const LoadFunction& load,
                                const ProblemSpec& spec) {
  return load_vector_impl(grid, load, spec);
}

double discrete_energy(const DiscreteState& state, const LoadFunction& load, const ProblemSpec& spec) {
  check_state(state);
  const auto& g = state.grid;
  const auto& u = state.u_nodes;
  const auto w = cell_weights(g, spec);
  const auto b = load_vector_impl(g, load, spec);
  long double sum = 0.0L;
  for (std::size_t c = 0; c + 1 < g.size(); ++c) {
    const double d = (u[c + 1] - u[c]) / (g[c + 1] - g[c]);
    const double well = 0.5 * d * d - spec.lambda;
    sum += static_cast<long double>(0.5 * spec.nu * well * well * w[c]);
  }
  for (std::size_t j = 0; j < g.size(); ++j) sum -= static_cast<long double>(b[j] * u[j]);
  return static_cast<double>(sum);
}

std::vector<double> discrete_gradient(const DiscreteState& state, const LoadFunction& load,
                                      const ProblemSpec& spec) {
  check_state(state);
  const auto& g = state.grid;
  const auto& u = state.u_nodes;
  const auto w = cell_weights(g, spec);
  auto grad = load_vector_impl(g, load, spec);
  for (auto& x : grad) x = -x;
  for (std::size_t c = 0; c + 1 < g.size(); ++c) {
    const double dr = g[c + 1] - g[c];
    const double d = (u[c + 1] - u[c]) / dr;
    const double q = flux(d, spec) * w[c] / dr;
    grad[c] -= q;
    grad[c + 1] += q;
  }
  return grad;
}

DescentResult descend(const DiscreteState& start, const LoadFunction& load, const ProblemSpec& spec,
                      const DescentControls& controls) {
  check_state(start);
  const auto& grid = start.grid;
  const auto N = static_cast<Eigen::Index>(grid.size());
  const auto w = cell_weights(grid, spec);
  const auto loads = load_vector_impl(grid, load, spec);
  const double length = grid.back() - grid.front();

  // Metric: nu (2 lambda) int g'^2 + nu lambda / L^2 int g^2, the curvature of
  // the energy at the wells plus a small mass term for the constant mode.
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double dr = grid[c + 1] - grid[c];
    const double k = spec.nu * 2.0 * spec.lambda * w[c] / (dr * dr);
    const double m = 0.5 * spec.nu * spec.lambda * w[c] / (length * length);
    const auto i = static_cast<Eigen::Index>(c);
    entries.emplace_back(i, i, k + m);
    entries.emplace_back(i + 1, i + 1, k + m);
    entries.emplace_back(i, i + 1, -k);
    entries.emplace_back(i + 1, i, -k);
  }
  Eigen::SparseMatrix<double> metric(N, N);
  metric.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(metric);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "descend: metric factorisation failed");
  }

  DescentResult result;
  result.state = start;
  auto& u = result.state.u_nodes;
  double energy = discrete_energy(result.state, load, spec);
  result.initial_energy = energy;
  double step = 1.0;
  std::vector<double> delta(u.size());

  for (int it = 0; it < controls.max_iterations; ++it) {
    const auto grad = discrete_gradient(result.state, load, spec);
    const double gnorm = std::abs(*std::max_element(
        grad.begin(), grad.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
    result.final_gradient_norm = gnorm;
    if (gnorm <= controls.gradient_tolerance) {
      result.converged = true;
      break;
    }
    const Eigen::Map<const Eigen::VectorXd> g(grad.data(), N);
    const Eigen::VectorXd dir = -solver.solve(g);
    const double slope = g.dot(dir);

    step = std::min(1.0, 2.0 * step);
    bool accepted = false;
    for (int k = 0; k < controls.max_backtracks; ++k) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        delta[i] = step * dir(static_cast<Eigen::Index>(i));
      }
      const double change = energy_change(result.state, delta, w, loads, spec);
      if (change <= controls.armijo * step * slope && change < 0.0) {
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += delta[i];
        energy += change;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.stalled = true;
      break;
    }
    ++result.iterations;
    result.energy_history.push_back(energy);
  }
  // Re-evaluate directly so the reported value does not carry accumulated increments.
  result.final_energy = discrete_energy(result.state, load, spec);
  return result;
}

ResidualField el_residual_direct(const DiscreteState& state, const LoadFunction& load,
                                 const ProblemSpec& spec) {
  check_state(state);
  const auto& g = state.grid;
  const auto& u = state.u_nodes;
  ResidualField out;
  out.values.assign(g.size(), 0.0);
  auto cell_flux = [&](std::size_t c) {
    const double d = (u[c + 1] - u[c]) / (g[c + 1] - g[c]);
    const double mid = 0.5 * (g[c] + g[c + 1]);
    return spec.radial_weight(mid) * flux(d, spec);
  };
  for (std::size_t j = 1; j + 1 < g.size(); ++j) {
    const double span = 0.5 * (g[j + 1] - g[j - 1]);
    out.values[j] = (cell_flux(j) - cell_flux(j - 1)) / span + load(g[j]) * spec.radial_weight(g[j]);
    out.max_abs = std::max(out.max_abs, std::abs(out.values[j]));
  }
  return out;
}

std::vector<double> smooth_perturbation(const RadialGrid& grid, double amplitude, int modes,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(modes));
  for (auto& x : c) x = coef(rng);
  const double a = grid.front();
  const double L = grid.back() - a;
  std::vector<double> out(grid.size(), 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int k = 1; k <= modes; ++k) {
      out[i] += c[static_cast<std::size_t>(k - 1)] * std::cos(k * std::numbers::pi * (grid[i] - a) / L);
    }
    peak = std::max(peak, std::abs(out[i]));
  }
  if (peak > 0.0) {
    for (auto& x : out) x *= amplitude / peak;
  }
  return out;
}

std::vector<double> remove_mean(std::vector<double> u) {
  if (u.empty()) return u;
  const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
  for (auto& x : u) x -= mean;
  return u;
}

MultiStartSummary multi_start(const RadialGrid& grid, const LoadFunction& load,
                              const ProblemSpec& spec, int starts, std::uint64_t seed,
                              double amplitude, const DescentControls& controls) {
  MultiStartSummary out;
  std::mt19937_64 seeds(seed);
  for (int s = 0; s < starts; ++s) {
    DiscreteState start{grid, smooth_perturbation(grid, amplitude, 6, seeds())};
    auto run = descend(start, load, spec, controls);
    if (run.converged) ++out.converged;
    if (s == 0) {
      out.min_energy = out.max_energy = run.final_energy;
    } else {
      out.min_energy = std::min(out.min_energy, run.final_energy);
      out.max_energy = std::max(out.max_energy, run.final_energy);
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace dwdual
