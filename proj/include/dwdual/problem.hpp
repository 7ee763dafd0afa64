#pragma once

// Problem data for the double-well functional on an n-dimensional annulus
// R2 < |x| < R1: material constants, the radial load f(r), the radial grid,
// and the hypothesis checks every downstream module relies on.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dwdual {

struct ProblemSpec {
  double nu = 1.0;      // stiffness
  double lambda = 1.0;  // well parameter; wells sit at |grad u|^2 = 2 lambda
  double R1 = 2.0;      // outer radius
  double R2 = 1.0;      // inner radius
  int n = 2;            // spatial dimension

  /// Area of the unit sphere S^{n-1}; dx = omega r^{n-1} dr.
  double omega() const;
  /// r^{n-1}, the radial volume weight without omega.
  double radial_weight(double r) const;
  /// |Omega| from the closed-form ball volumes.
  double volume() const;
};

struct HypothesisCheck {
  std::string name;   // e.g. "R1 > R2"
  std::string field;  // config path of the offending field, e.g. "spec.R1"
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool passed() const;
  const HypothesisCheck* first_failure() const;
};

ValidationReport validate_spec(const ProblemSpec& spec);

/// Gamma(m/2) for m >= 1 by the recursion from Gamma(1/2) and Gamma(1).
double gamma_half_integer(int m);

/// omega_{n-1} = 2 pi^{n/2} / Gamma(n/2). For n = 1 the "sphere" is two
/// points and the value is 2.
double sphere_area(int n);

class RadialGrid {
 public:
  RadialGrid() = default;
  /// Nodes must be strictly increasing, at least 3 of them.
  explicit RadialGrid(std::vector<double> nodes);

  static RadialGrid uniform(double a, double b, std::size_t count);

  std::span<const double> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  double operator[](std::size_t i) const { return nodes_[i]; }

  /// Index j of the cell [r_j, r_{j+1}] containing r (clamped to the range).
  std::size_t cell_of(double r) const;

  bool operator==(const RadialGrid&) const = default;

 private:
  std::vector<double> nodes_;
};

enum class LoadKind { BuiltinLinear, Tabulated };

struct LoadSample {
  double r;
  double f;
};

/// Radially symmetric load f(r) on [R2, R1].
class LoadFunction {
 public:
  /// f(r) = amplitude * (r3 - r).
  static LoadFunction linear(double amplitude, double r3);
  /// Piecewise-linear interpolation of the samples; radii must increase
  /// strictly. Range against the annulus is checked by validate_load.
  static LoadFunction tabulated(std::vector<LoadSample> samples);
  /// f == 0 on [R2, R1]. Violates the single-zero hypothesis; only useful as
  /// an analytic test case.
  static LoadFunction zero(const ProblemSpec& spec);

  double operator()(double r) const;

  LoadKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  /// The interior zero; for tabulated loads the first sign change, NaN if none.
  double r3() const { return r3_; }
  std::span<const LoadSample> samples() const { return samples_; }
  /// Points where f (or |f|) fails to be smooth; sorted.
  std::span<const double> breakpoints() const { return breakpoints_; }
  bool is_identically_zero() const;

 private:
  LoadKind kind_ = LoadKind::BuiltinLinear;
  double amplitude_ = 0.0;
  double r3_ = 0.0;
  std::vector<LoadSample> samples_;
  std::vector<double> breakpoints_;
};

/// Linear load a (R3 - r) whose R3 makes the balance integral vanish in
/// closed form: R3 = n/(n+1) (R1^{n+1} - R2^{n+1}) / (R1^n - R2^n).
LoadFunction balanced_linear_load(const ProblemSpec& spec, double amplitude);

struct LoadReport {
  double balance_residual = 0.0;  // |int_{R2}^{R1} f rho^{n-1} drho|
  double balance_tolerance = 1e-10;
  bool balance_ok = false;

  int sign_changes = 0;  // on the fine sampling grid
  double r3 = 0.0;
  bool single_zero_ok = false;

  double l1_norm = 0.0;   // omega int |f| rho^{n-1} drho
  double l1_bound = 0.0;  // 4 lambda nu R2^{n-1} sqrt(2 lambda pi^n) / (3 sqrt3 Gamma(n/2))
  bool l1_ok = false;

  bool passed() const { return balance_ok && single_zero_ok && l1_ok; }
};

/// Smallness bound on ||f||_{L1(Omega)} that keeps F^2 r^2 below the
/// critical amplitude of the cubic.
double l1_bound(const ProblemSpec& spec);

/// Throws Error(MalformedLoad) when tabulated radii do not cover [R2, R1].
LoadReport validate_load(const LoadFunction& load, const ProblemSpec& spec);

}  // namespace dwdual
