#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dwdual/dual_algebra.hpp"
#include "dwdual/error.hpp"
#include "support.hpp"

using namespace dwdual;

namespace {

double residual(double z, double A, double nu, double lambda) {
  return std::abs(evaluate_E(z, nu, lambda) - A) / std::max(1.0, A);
}

// Roots of E(y) - A on [-nu lambda, ymax] by a sign-change scan plus bisection.
std::vector<double> brute_force_roots(double A, double nu, double lambda) {
  const double lo = -nu * lambda;
  const double hi = std::max(1.0, std::cbrt(A * nu)) + std::sqrt(A / (2.0 * lambda));
  auto g = [&](double y) { return 2.0 * y * y * (lambda + y / nu) - A; };
  std::vector<double> roots;
  const int N = 20000;
  double prev_y = lo, prev_g = g(lo);
  for (int i = 1; i <= N; ++i) {
    const double y = lo + (hi - lo) * i / N;
    const double gy = g(y);
    if ((prev_g < 0) != (gy < 0)) roots.push_back(testing::bisect(g, prev_y, y));
    prev_y = y;
    prev_g = gy;
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

}  // namespace

TEST_CASE("E and the critical amplitude") {
  CHECK(evaluate_E(0.0, 1.0, 1.0) == 0.0);
  CHECK(evaluate_E(-1.0, 1.0, 1.0) == 0.0);
  CHECK(evaluate_E(1.0, 2.0, 3.0) == doctest::Approx(2.0 * (3.0 + 0.5)));
  CHECK(critical_amplitude(1.0, 1.0) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
  CHECK(critical_amplitude(2.0, 3.0) == doctest::Approx(8.0 * 27.0 * 4.0 / 27.0).epsilon(1e-15));
  CHECK(evaluate_E(-2.0 / 3.0, 1.0, 1.0) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate_E(-1.5, 1.0, 1.0), Error);
}

TEST_CASE("roots at A = 0") {
  for (double nu : {0.5, 1.0, 2.0}) {
    for (double lambda : {0.3, 1.0, 1.7}) {
      const auto s = solve_dae(0.0, nu, lambda);
      CHECK(s.count == 3);
      CHECK(s.roots[0] == 0.0);
      CHECK(s.roots[1] == 0.0);
      CHECK(s.roots[2] == doctest::Approx(-nu * lambda).epsilon(1e-15));
    }
  }
}

TEST_CASE("roots at the critical amplitude") {
  const auto s = solve_dae(8.0 / 27.0, 1.0, 1.0);
  CHECK(s.regime == RootRegime::CriticalDouble);
  CHECK(s.roots[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(s.roots[1] == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(s.roots[2] == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("single root above the critical amplitude") {
  // nu = lambda = 1, A = 2: zeta^3 + zeta^2 - 1 = 0.
  const double expected = testing::bisect([](double z) { return z * z * z + z * z - 1.0; }, 0.0, 1.0);
  CHECK(expected == doctest::Approx(0.754877666246693).epsilon(1e-12));
  const auto s = solve_dae(2.0, 1.0, 1.0);
  CHECK(s.regime == RootRegime::SingleRoot);
  CHECK(s.count == 1);
  CHECK(s.roots[0] == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(branch_root(2.0, Branch::Two, 1.0, 1.0), Error);
}

TEST_CASE("negative amplitude is rejected, tiny negative noise is clamped") {
  try {
    solve_dae(-1e-3, 1.0, 1.0);
    FAIL("expected NegativeAmplitude");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeAmplitude);
  }
  const auto s = solve_dae(-1e-16, 1.0, 1.0);
  CHECK(s.roots[0] == 0.0);
}

TEST_CASE("near-critical amplitude keeps the two lower roots apart") {
  const double crit = critical_amplitude(1.0, 1.0);
  const double A = crit * (1.0 - 1e-8);
  const auto s = solve_dae(A, 1.0, 1.0);
  CHECK(s.regime == RootRegime::ThreeRoots);
  CHECK(s.roots[1] > -2.0 / 3.0);
  CHECK(s.roots[2] < -2.0 / 3.0);
  for (double z : s.roots) CHECK(residual(z, A, 1.0, 1.0) <= 1e-12);
  // Expansion about the double root: E(-2/3 + d) ~ crit - 2 d^2, so d ~ sqrt(crit 1e-8 / 2).
  const double d = std::sqrt(crit * 1e-8 / 2.0);
  CHECK(s.roots[1] + 2.0 / 3.0 == doctest::Approx(d).epsilon(1e-3));
  CHECK(-2.0 / 3.0 - s.roots[2] == doctest::Approx(d).epsilon(1e-3));
}

TEST_CASE("property: residual and strict ordering on random amplitudes") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> param(0.1, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double nu = param(rng), lambda = param(rng);
    const double crit = critical_amplitude(nu, lambda);
    const double A = unit(rng) < 0.5 ? crit * unit(rng) : crit * std::pow(10.0, -12.0 * unit(rng));
    if (A <= 0.0 || A >= crit) continue;
    const auto s = solve_dae(A, nu, lambda);
    const auto& z = s.roots;
    bool ok = s.count == 3 && z[0] > 0.0 && 0.0 > z[1] && z[1] > -2.0 * nu * lambda / 3.0 &&
              -2.0 * nu * lambda / 3.0 > z[2] && z[2] > -nu * lambda;
    for (double zi : z) ok = ok && residual(zi, A, nu, lambda) <= 1e-12;
    for (Branch b : {Branch::One, Branch::Two, Branch::Three}) {
      ok = ok && branch_root(A, b, nu, lambda) == doctest::Approx(s.zeta(b)).epsilon(1e-13);
    }
    if (!ok) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: agreement with a brute-force scan") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> param(0.2, 2.5);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const double nu = param(rng), lambda = param(rng);
    const double A = critical_amplitude(nu, lambda) * unit(rng);
    const auto expected = brute_force_roots(A, nu, lambda);
    REQUIRE(expected.size() == 3);
    const auto s = solve_dae(A, nu, lambda);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(s.roots[i] - expected[i]) <= 1e-10);
  }
  // Above the critical amplitude exactly one root remains.
  for (int trial = 0; trial < 50; ++trial) {
    const double nu = param(rng), lambda = param(rng);
    const double A = critical_amplitude(nu, lambda) * (1.5 + 10.0 * unit(rng));
    const auto expected = brute_force_roots(A, nu, lambda);
    REQUIRE(expected.size() == 1);
    const auto s = solve_dae(A, nu, lambda);
    CHECK(s.count == 1);
    CHECK(std::abs(s.roots[0] - expected[0]) <= 1e-10 * std::max(1.0, expected[0]));
  }
}

TEST_CASE("property: monotone and continuous branches") {
  // zeta1 increases with A, zeta2 decreases; zeta3 increases from -nu lambda
  // towards the double root -2 nu lambda / 3 (E' > 0 below the double root).
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> param(0.2, 2.5);
  for (int trial = 0; trial < 50; ++trial) {
    const double nu = param(rng), lambda = param(rng);
    const double crit = critical_amplitude(nu, lambda);
    CubicRootSet prev = solve_dae(0.0, nu, lambda);
    const int steps = 400;
    for (int k = 1; k < steps; ++k) {
      const double A = crit * k / steps;
      const auto s = solve_dae(A, nu, lambda);
      CHECK(s.roots[0] > prev.roots[0]);
      CHECK(s.roots[1] < prev.roots[1]);
      CHECK(s.roots[2] > prev.roots[2]);
      prev = s;
    }
    // Continuity away from the critical point: a tiny change in A moves each root a little.
    const double A = 0.5 * crit;
    const auto s0 = solve_dae(A, nu, lambda);
    const auto s1 = solve_dae(A * (1.0 + 1e-9), nu, lambda);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(s1.roots[i] - s0.roots[i]) <= 1e-8 * nu * lambda);
  }
}

TEST_CASE("tiny amplitudes keep relative accuracy") {
  for (double A : {1e-30, 1e-20, 1e-14, 1e-9}) {
    const double z1 = branch_root(A, Branch::One, 1.0, 1.0);
    const double z2 = branch_root(A, Branch::Two, 1.0, 1.0);
    // zeta ~ +- sqrt(A/2) for small A
    CHECK(z1 == doctest::Approx(std::sqrt(A / 2.0)).epsilon(1e-4));
    CHECK(z2 == doctest::Approx(-std::sqrt(A / 2.0)).epsilon(1e-4));
    CHECK(std::abs(evaluate_E(z1, 1.0, 1.0) - A) <= 1e-12 * A);
    CHECK(std::abs(evaluate_E(z2, 1.0, 1.0) - A) <= 1e-12 * A);
  }
}
