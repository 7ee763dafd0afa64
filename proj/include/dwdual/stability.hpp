#pragma once

// Second-variation analysis of a critical point.
//
// Perturbations phi = g(r) Y_l(theta) with Y_l a unit-normalised degree-l
// spherical harmonic turn the primal second variation into one radial form
// per angular mode,
//
//   Q_l[g] = nu omega int [ u'^2 g'^2 + (u'^2/2 - lambda)(g'^2 + kappa_l g^2/r^2) ] r^{n-1} dr,
//
// with kappa_l = l(l + n - 2) the Laplace-Beltrami eigenvalue on S^{n-1}.
// Each Q_l is discretised on continuous piecewise-linear g without boundary
// conditions and its spectrum is taken against the L2(Omega) Gram matrix.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dwdual/fields.hpp"

namespace dwdual {

inline constexpr std::size_t kDefaultElements = 400;
inline constexpr double kEigenTolerance = 1e-8;  // relative to the spectral scale

/// l (l + n - 2)
double mode_kappa(int l, int n);

struct ModeMatrices {
  int l = 0;
  double kappa = 0.0;
  Eigen::MatrixXd form;
  Eigen::MatrixXd gram;
};

/// Throws Domain for l >= 1 when n == 1 (no angular directions).
ModeMatrices mode_form(const CriticalPoint& cp, int l, const ProblemSpec& spec,
                       std::size_t elements = kDefaultElements);

/// Smallest eigenvalue of form x = mu gram x. Throws NumericalFailure if the
/// solver does not converge.
double min_eigenvalue(const Eigen::MatrixXd& form, const Eigen::MatrixXd& gram);

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

EigenRange eigen_range(const Eigen::MatrixXd& form, const Eigen::MatrixXd& gram);

/// Rayleigh quotient x^T form x / x^T gram x.
double rayleigh_quotient(const ModeMatrices& m, const Eigen::VectorXd& x);

struct ModeEntry {
  int l = 0;
  double kappa = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

struct ModeSpectrum {
  std::optional<Branch> branch;
  std::vector<ModeEntry> modes;
  double scale = 0.0;  // largest |eigenvalue| over all modes
};

/// Modes 0..max_mode (only mode 0 when n == 1).
ModeSpectrum mode_spectrum(const CriticalPoint& cp, const ProblemSpec& spec, int max_mode,
                           std::size_t elements = kDefaultElements);

/// Sign information for the dual second variation
///   delta^2 I_d = -int ( |sigma|^2/zeta^3 + 1/nu ) psi^2 dx,
/// whose bracket equals 2 lambda / zeta + 3 / nu on the branch.
struct DualCurvature {
  Branch branch = Branch::One;
  std::vector<double> bracket;  // interior nodes only
  int positive = 0;
  int negative = 0;
  int zero = 0;
  int bracket_sign = 0;  // +1 / -1 when uniform, 0 when mixed or zero
  int form_sign = 0;     // sign of delta^2 I_d = -bracket_sign
};

double dual_bracket(double zeta, Branch branch, const ProblemSpec& spec);

DualCurvature dual_curvature(const DualBranchField& zeta, const ProblemSpec& spec);

enum class Verdict { LocalMin, LocalMax, RadialMinAngularUnstable, Indefinite };

const char* to_string(Verdict v) noexcept;

struct Classification {
  std::optional<Branch> branch;
  Verdict verdict = Verdict::Indefinite;
  double tolerance = 0.0;
  ModeSpectrum spectrum;
  std::optional<DualCurvature> curvature;
};

/// Verdict from eigenvalue signs alone, with tolerance kEigenTolerance * scale:
/// every mode minimum >= -tol -> local-min; else every mode maximum <= tol ->
/// local-max; else mode 0 minimum >= -tol with some higher mode minimum < -tol
/// -> radial-min-but-angular-unstable; otherwise indefinite.
Classification classify(const ModeSpectrum& spectrum, std::optional<DualCurvature> curvature = {});

}  // namespace dwdual
