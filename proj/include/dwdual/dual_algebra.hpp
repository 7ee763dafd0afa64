#pragma once

// Pointwise cubic 2 zeta^2 (lambda + zeta/nu) = A relating the dual stress
// zeta to the stress amplitude A = |sigma|^2.

#include <array>
#include <cstddef>

namespace dwdual {

enum class Branch { One = 1, Two = 2, Three = 3 };

inline int index(Branch b) { return static_cast<int>(b); }

enum class RootRegime { ThreeRoots, CriticalDouble, SingleRoot };

const char* to_string(RootRegime regime) noexcept;

struct CubicRootSet {
  double amplitude = 0.0;
  /// Sorted descending. Only roots[0] is meaningful for SingleRoot. For
  /// CriticalDouble the double root is stored in both roots[1] and roots[2].
  std::array<double, 3> roots{};
  std::size_t count = 0;
  RootRegime regime = RootRegime::ThreeRoots;

  double zeta(Branch b) const { return roots[static_cast<std::size_t>(index(b) - 1)]; }
};

/// E(y) = 2 y^2 (lambda + y/nu); domain y >= -nu lambda.
double evaluate_E(double y, double nu, double lambda);

/// Maximum of E over [-nu lambda, 0]: 8 lambda^3 nu^2 / 27, attained at -2 nu lambda / 3.
double critical_amplitude(double nu, double lambda);

inline constexpr double kRootTolerance = 1e-12;    // relative, on |E(zeta) - A|
inline constexpr double kRegimeTolerance = 1e-12;  // relative to the critical amplitude
inline constexpr double kNegativeClamp = 1e-14;

/// All real roots of E(zeta) = A in [-nu lambda, inf), regime-tagged.
/// Closed-form (trigonometric / Cardano) start followed by bracketed Newton
/// polish on each root.
CubicRootSet solve_dae(double A, double nu, double lambda);

/// One root of the three-root regime without computing the others. Requires
/// 0 <= A <= critical_amplitude. Relative accuracy holds even for tiny A.
double branch_root(double A, Branch branch, double nu, double lambda);

}  // namespace dwdual
