#include "dwdual/dual_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dwdual/error.hpp"

namespace dwdual {

const char* to_string(RootRegime regime) noexcept {
  switch (regime) {
    case RootRegime::ThreeRoots: return "three-roots";
    case RootRegime::CriticalDouble: return "critical-double";
    case RootRegime::SingleRoot: return "single-root";
  }
  return "unknown";
}

double evaluate_E(double y, double nu, double lambda) {
  if (y < -nu * lambda) {
    throw Error(ErrorKind::Domain, "evaluate_E: y below -nu*lambda");
  }
  return 2.0 * y * y * (lambda + y / nu);
}

double critical_amplitude(double nu, double lambda) {
  return 8.0 * lambda * lambda * lambda * nu * nu / 27.0;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Below this fraction of the critical amplitude the series starts are better
// than the closed forms, which lose relative accuracy in the two small roots.
constexpr double kSeriesFraction = 1e-6;

// Monic form: zeta^2 (zeta + nu lambda) - nu A / 2, same roots as E - A.
struct Monic {
  double nl;    // nu * lambda
  double half;  // nu * A / 2

  double value(double z) const { return z * z * (z + nl) - half; }
  double slope(double z) const { return z * (3.0 * z + 2.0 * nl); }
};

// Newton with bisection fallback inside a sign-change bracket [lo, hi].
double polish(const Monic& p, double guess, double lo, double hi) {
  double plo = p.value(lo);
  if (plo == 0.0) return lo;
  if (p.value(hi) == 0.0) return hi;
  double x = std::clamp(guess, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = p.value(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (plo < 0.0)) {
      lo = x;
      plo = fx;
    } else {
      hi = x;
    }
    const double d = p.slope(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double scale = std::max(std::abs(next), std::numeric_limits<double>::min());
    if (std::abs(next - x) <= 2.0 * kEps * scale || (hi - lo) <= 2.0 * kEps * scale) {
      return next;
    }
    x = next;
  }
  throw Error(ErrorKind::NumericalFailure, "solve_dae: root polish did not converge");
}

struct Bracket {
  double lo;
  double hi;
};

Bracket bracket_for(Branch b, double A, double nu, double lambda) {
  const double nl = nu * lambda;
  switch (b) {
    case Branch::One:
      // p(sqrt(A/2lambda)) = sqrt(A/2lambda) * A/(2 lambda) >= 0
      return {0.0, std::sqrt(A / (2.0 * lambda))};
    case Branch::Two: return {-2.0 * nl / 3.0, 0.0};
    case Branch::Three: return {-nl, -2.0 * nl / 3.0};
  }
  return {0.0, 0.0};
}

double series_guess(Branch b, double A, double nu, double lambda) {
  const double s = std::sqrt(A / (2.0 * lambda));
  const double second = A / (4.0 * lambda * lambda * nu);
  switch (b) {
    case Branch::One: return s - second;
    case Branch::Two: return -s - second;
    case Branch::Three: return -nu * lambda + A / (2.0 * nu * lambda * lambda);
  }
  return 0.0;
}

// Trigonometric form of the three real roots, descending.
std::array<double, 3> trig_roots(double A, double nu, double lambda) {
  const double nl = nu * lambda;
  // zeta = t - nl/3 gives t^3 + p t + q = 0.
  const double p = -nl * nl / 3.0;
  const double q = 2.0 * nl * nl * nl / 27.0 - 0.5 * nu * A;
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  std::array<double, 3> t{};
  for (int k = 0; k < 3; ++k) {
    t[static_cast<std::size_t>(k)] = m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - nl / 3.0;
  }
  std::sort(t.begin(), t.end(), std::greater<>());
  return t;
}

double cardano_root(double A, double nu, double lambda) {
  const double nl = nu * lambda;
  const double p = -nl * nl / 3.0;
  const double q = 2.0 * nl * nl * nl / 27.0 - 0.5 * nu * A;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  const double sq = std::sqrt(std::max(disc, 0.0));
  return std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq) - nl / 3.0;
}

double clamp_amplitude(double A) {
  if (!(A >= -kNegativeClamp)) {
    throw Error(ErrorKind::NegativeAmplitude,
                "solve_dae: amplitude must be >= 0, got " + std::to_string(A));
  }
  return std::max(A, 0.0);
}

}  // namespace

CubicRootSet solve_dae(double A, double nu, double lambda) {
  if (!(nu > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorKind::Domain, "solve_dae: nu and lambda must be positive");
  }
  A = clamp_amplitude(A);
  const double nl = nu * lambda;
  const double crit = critical_amplitude(nu, lambda);
  const Monic p{nl, 0.5 * nu * A};

  CubicRootSet out;
  out.amplitude = A;

  if (A == 0.0) {
    out.roots = {0.0, 0.0, -nl};
    out.count = 3;
    out.regime = RootRegime::ThreeRoots;
    return out;
  }

  if (std::abs(A - crit) <= kRegimeTolerance * crit) {
    const auto b1 = bracket_for(Branch::One, A, nu, lambda);
    out.roots = {polish(p, nl / 3.0, b1.lo, b1.hi), -2.0 * nl / 3.0, -2.0 * nl / 3.0};
    out.count = 3;
    out.regime = RootRegime::CriticalDouble;
    return out;
  }

  if (A > crit) {
    const auto b1 = bracket_for(Branch::One, A, nu, lambda);
    out.roots = {polish(p, cardano_root(A, nu, lambda), b1.lo, b1.hi), 0.0, 0.0};
    out.count = 1;
    out.regime = RootRegime::SingleRoot;
    return out;
  }

  const bool small = A < kSeriesFraction * crit;
  const auto start = small ? std::array<double, 3>{series_guess(Branch::One, A, nu, lambda),
                                                   series_guess(Branch::Two, A, nu, lambda),
                                                   series_guess(Branch::Three, A, nu, lambda)}
                           : trig_roots(A, nu, lambda);
  for (Branch b : {Branch::One, Branch::Two, Branch::Three}) {
    const auto i = static_cast<std::size_t>(index(b) - 1);
    const auto br = bracket_for(b, A, nu, lambda);
    out.roots[i] = polish(p, start[i], br.lo, br.hi);
  }
  out.count = 3;
  out.regime = RootRegime::ThreeRoots;
  return out;
}

double branch_root(double A, Branch branch, double nu, double lambda) {
  A = clamp_amplitude(A);
  const double nl = nu * lambda;
  const double crit = critical_amplitude(nu, lambda);
  if (A == 0.0) {
    return branch == Branch::Three ? -nl : 0.0;
  }
  if (std::abs(A - crit) <= kRegimeTolerance * crit && branch != Branch::One) {
    return -2.0 * nl / 3.0;
  }
  if (A > crit) {
    throw Error(ErrorKind::AmplitudeOverflow,
                "branch_root: amplitude exceeds the critical value 8 lambda^3 nu^2 / 27");
  }
  const Monic p{nl, 0.5 * nu * A};
  const double guess = A < kSeriesFraction * crit
                           ? series_guess(branch, A, nu, lambda)
                           : trig_roots(A, nu, lambda)[static_cast<std::size_t>(index(branch) - 1)];
  const auto br = bracket_for(branch, A, nu, lambda);
  return polish(p, guess, br.lo, br.hi);
}

}  // namespace dwdual
