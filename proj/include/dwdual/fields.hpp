#pragma once

// Radial stress F(r), the three dual branch fields zeta_i(r) and the
// displacement profiles u_i(r) they generate.
//
// The stress ansatz is sigma(x) = F(|x|) x with F' + n F / r = -f / r and
// F(R2) = 0, i.e. F(r) = -G(r) / r^n with G(r) = int_{R2}^r f rho^{n-1}.
// Hence |sigma|^2 = F^2 r^2 =: A(r), and on branch i the radial strain is
// u_i'(r) = F(r) r / zeta_i(r) where zeta_i solves E(zeta) = A(r).

#include <functional>
#include <optional>
#include <vector>

#include "dwdual/dual_algebra.hpp"
#include "dwdual/problem.hpp"

namespace dwdual {

struct StressCertificate {
  double inner_residual = 0.0;  // |F(R2)|
  double outer_residual = 0.0;  // |F(R1)|
  double endpoint_tolerance = 1e-10;
  bool endpoints_ok = false;

  int sign = 0;  // sign of F on the open interval; 0 if F vanishes there
  bool sign_constant = false;

  double min_interior_amplitude = 0.0;
  double max_interior_amplitude = 0.0;
  double critical = 0.0;
  bool amplitude_bounded = false;  // 0 < A < critical at every interior node

  bool degenerate = false;  // f == 0 accepted through StressOptions

  bool certified() const {
    return degenerate || (endpoints_ok && sign_constant && amplitude_bounded);
  }
};

struct StressOptions {
  bool allow_zero_load = false;
};

class RadialStress {
 public:
  RadialStress(ProblemSpec spec, LoadFunction load, RadialGrid grid);

  const ProblemSpec& spec() const { return spec_; }
  const LoadFunction& load() const { return load_; }
  const RadialGrid& grid() const { return grid_; }

  const std::vector<double>& G_values() const { return G_; }
  const std::vector<double>& F_values() const { return F_; }
  const std::vector<double>& amplitude_values() const { return A_; }
  const StressCertificate& certificate() const { return cert_; }

  double G_at(double r) const;
  double F_at(double r) const;
  double amplitude_at(double r) const;

  /// Sign used for the removable endpoint limits of branches 1 and 2.
  /// Equals certificate().sign, or -1 for the degenerate zero load.
  int limit_sign() const { return cert_.sign != 0 ? cert_.sign : -1; }

  bool is_endpoint(double r) const { return r == grid_.front() || r == grid_.back(); }

 private:
  friend RadialStress compute_F(const LoadFunction&, const ProblemSpec&, const RadialGrid&,
                                StressOptions);

  ProblemSpec spec_;
  LoadFunction load_;
  RadialGrid grid_;
  std::vector<double> G_, F_, A_;
  StressCertificate cert_;
};

/// Throws AmplitudeOverflow when A(r) reaches the critical amplitude at an
/// interior node, DegenerateLoad for f == 0 unless explicitly allowed.
RadialStress compute_F(const LoadFunction& load, const ProblemSpec& spec, const RadialGrid& grid,
                       StressOptions options = {});

/// Below this fraction of the critical amplitude branches 1 and 2 use the
/// analytic limit of F r / zeta instead of dividing.
inline constexpr double kSwitchFraction = 1e-10;

struct DualBranchField {
  Branch branch = Branch::One;
  RadialGrid grid;
  std::vector<double> zeta_values;
  double max_dae_residual = 0.0;  // max over nodes of |E(zeta) - A| / max(1, A)
  /// zeta_i at any r in [R2, R1].
  std::function<double(double)> zeta_at;
};

DualBranchField dual_field(const RadialStress& stress, Branch branch, const ProblemSpec& spec);

/// A radial displacement profile together with its strain. The strain is
/// available at any radius so integrals can be taken at full order.
struct CriticalPoint {
  std::optional<Branch> branch;
  RadialGrid grid;
  std::vector<double> u_values;
  std::vector<double> strain_values;
  double constant = 0.0;  // u(R2)
  std::function<double(double)> strain_at;

  double u_at(double r) const;
  CriticalPoint shifted(double c) const;

  /// u(r) = C + int_{R2}^r strain.
  static CriticalPoint from_strain(RadialGrid grid, std::function<double(double)> strain, double C,
                                   std::optional<Branch> branch = std::nullopt);
};

/// u_i(r) = C + int_{R2}^r F(rho) rho / zeta_i(rho) drho.
CriticalPoint displacement(const RadialStress& stress, const DualBranchField& zeta, double C,
                           const ProblemSpec& spec);

/// Strain limit of branch 1/2 as A -> 0: +-sqrt(2 lambda) times the sign of F.
double endpoint_strain_limit(Branch branch, int sign, double lambda);

struct ResidualField {
  std::vector<double> values;
  double max_abs = 0.0;
};

/// nu (u'^2/2 - lambda) u' - F r at every node.
ResidualField strain_consistency(const CriticalPoint& cp, const RadialStress& stress,
                                 const ProblemSpec& spec);

}  // namespace dwdual
