#include "dwdual/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dwdual/error.hpp"
#include "dwdual/quadrature.hpp"

namespace dwdual {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::LocalMin: return "local-min";
    case Verdict::LocalMax: return "local-max";
    case Verdict::RadialMinAngularUnstable: return "radial-min-but-angular-unstable";
    case Verdict::Indefinite: return "indefinite";
  }
  return "unknown";
}

double mode_kappa(int l, int n) { return static_cast<double>(l) * (l + n - 2); }

ModeMatrices mode_form(const CriticalPoint& cp, int l, const ProblemSpec& spec,
                       std::size_t elements) {
  if (l < 0) throw Error(ErrorKind::Domain, "mode_form: l must be >= 0");
  if (spec.n == 1 && l >= 1) {
    throw Error(ErrorKind::Domain, "mode_form: angular modes l >= 1 do not exist for n = 1");
  }
  if (elements < 2) throw Error(ErrorKind::Domain, "mode_form: need at least 2 elements");

  ModeMatrices out;
  out.l = l;
  out.kappa = mode_kappa(l, spec.n);
  const auto mesh = RadialGrid::uniform(cp.grid.front(), cp.grid.back(), elements + 1);
  const auto size = static_cast<Eigen::Index>(mesh.size());
  out.form = Eigen::MatrixXd::Zero(size, size);
  out.gram = Eigen::MatrixXd::Zero(size, size);

  const double nu_omega = spec.nu * spec.omega();
  const double lambda = spec.lambda;
  const double kappa = out.kappa;
  for (Eigen::Index e = 0; e + 1 < size; ++e) {
    const double a = mesh[static_cast<std::size_t>(e)];
    const double b = mesh[static_cast<std::size_t>(e) + 1];
    const double h = b - a;
    double stiffness = 0.0;  // int nu omega (3/2 u'^2 - lambda) r^{n-1}
    double mass[2][2] = {{0, 0}, {0, 0}};
    double gram[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t q = 0; q < quad::kNodes.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * h * quad::kNodes[q];
      const double w = 0.5 * h * quad::kWeights[q] * spec.radial_weight(r);
      const double s = cp.strain_at(r);
      const double phi[2] = {(b - r) / h, (r - a) / h};
      stiffness += w * nu_omega * (1.5 * s * s - lambda);
      const double angular = w * nu_omega * kappa * (0.5 * s * s - lambda) / (r * r);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          mass[i][j] += angular * phi[i] * phi[j];
          gram[i][j] += w * spec.omega() * phi[i] * phi[j];
        }
      }
    }
    const double stiff = stiffness / (h * h);
    const Eigen::Index idx[2] = {e, e + 1};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        out.form(idx[i], idx[j]) += (i == j ? stiff : -stiff) + mass[i][j];
        out.gram(idx[i], idx[j]) += gram[i][j];
      }
    }
  }
  return out;
}

EigenRange eigen_range(const Eigen::MatrixXd& form, const Eigen::MatrixXd& gram) {
  if (form.rows() != gram.rows() || form.cols() != gram.cols() || form.rows() != form.cols()) {
    throw Error(ErrorKind::Domain, "eigen_range: matrix dimensions differ");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(form, gram,
                                                                   Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure,
                "generalized eigen-solve failed (Gram matrix not positive definite or no "
                "convergence)");
  }
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double min_eigenvalue(const Eigen::MatrixXd& form, const Eigen::MatrixXd& gram) {
  return eigen_range(form, gram).min;
}

double rayleigh_quotient(const ModeMatrices& m, const Eigen::VectorXd& x) {
  return x.dot(m.form * x) / x.dot(m.gram * x);
}

ModeSpectrum mode_spectrum(const CriticalPoint& cp, const ProblemSpec& spec, int max_mode,
                           std::size_t elements) {
  ModeSpectrum out;
  out.branch = cp.branch;
  const int top = spec.n == 1 ? 0 : max_mode;
  for (int l = 0; l <= top; ++l) {
    const auto m = mode_form(cp, l, spec, elements);
    const auto range = eigen_range(m.form, m.gram);
    out.modes.push_back({l, m.kappa, range.min, range.max});
    out.scale = std::max({out.scale, std::abs(range.min), std::abs(range.max)});
  }
  return out;
}

double dual_bracket(double zeta, Branch branch, const ProblemSpec& spec) {
  if (zeta == 0.0) {
    // 2 lambda / zeta diverges; its sign follows the side the branch approaches from.
    return branch == Branch::Two ? -HUGE_VAL : HUGE_VAL;
  }
  return 2.0 * spec.lambda / zeta + 3.0 / spec.nu;
}

DualCurvature dual_curvature(const DualBranchField& zeta, const ProblemSpec& spec) {
  DualCurvature out;
  out.branch = zeta.branch;
  for (std::size_t i = 1; i + 1 < zeta.zeta_values.size(); ++i) {
    const double b = dual_bracket(zeta.zeta_values[i], zeta.branch, spec);
    out.bracket.push_back(b);
    if (b > 0.0) {
      ++out.positive;
    } else if (b < 0.0) {
      ++out.negative;
    } else {
      ++out.zero;
    }
  }
  const int total = static_cast<int>(out.bracket.size());
  if (total > 0 && out.positive == total) out.bracket_sign = 1;
  if (total > 0 && out.negative == total) out.bracket_sign = -1;
  out.form_sign = -out.bracket_sign;
  return out;
}

Classification classify(const ModeSpectrum& spectrum, std::optional<DualCurvature> curvature) {
  Classification out;
  out.branch = spectrum.branch;
  out.spectrum = spectrum;
  out.curvature = std::move(curvature);
  out.tolerance = kEigenTolerance * spectrum.scale;
  const double tol = out.tolerance;
  const auto& modes = spectrum.modes;

  const bool all_min_ok =
      std::all_of(modes.begin(), modes.end(), [&](const auto& m) { return m.min_eigenvalue >= -tol; });
  const bool all_max_ok =
      std::all_of(modes.begin(), modes.end(), [&](const auto& m) { return m.max_eigenvalue <= tol; });
  const bool radial_ok = !modes.empty() && modes.front().l == 0 && modes.front().min_eigenvalue >= -tol;
  const bool angular_negative = std::any_of(modes.begin(), modes.end(), [&](const auto& m) {
    return m.l >= 1 && m.min_eigenvalue < -tol;
  });

  if (all_min_ok) {
    out.verdict = Verdict::LocalMin;
  } else if (all_max_ok) {
    out.verdict = Verdict::LocalMax;
  } else if (radial_ok && angular_negative) {
    out.verdict = Verdict::RadialMinAngularUnstable;
  } else {
    out.verdict = Verdict::Indefinite;
  }
  return out;
}

}  // namespace dwdual
