#pragma once

#include <array>
#include <span>
#include <vector>

namespace dwdual::quad {

// 4-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 7.
inline constexpr std::array<double, 4> kNodes = {
    -0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
    0.86113631159405257522};
inline constexpr std::array<double, 4> kWeights = {
    0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
    0.34785484513745385737};

/// Gauss-Legendre on a single interval [a, b].
template <class Fn>
double gauss_legendre(Fn&& fn, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) {
    sum += kWeights[k] * fn(mid + half * kNodes[k]);
  }
  return half * sum;
}

/// Gauss-Legendre on [a, b], split at every breakpoint strictly inside the
/// interval so piecewise-smooth integrands keep full order.
template <class Fn>
double gauss_legendre(Fn&& fn, double a, double b, std::span<const double> breakpoints) {
  double sum = 0.0;
  double left = a;
  for (double bp : breakpoints) {
    if (bp <= left) continue;
    if (bp >= b) break;
    sum += gauss_legendre(fn, left, bp);
    left = bp;
  }
  return sum + gauss_legendre(fn, left, b);
}

/// Composite rule: 4 points per cell of `nodes`. Breakpoints must be sorted.
template <class Fn>
double integrate(Fn&& fn, std::span<const double> nodes, std::span<const double> breakpoints = {}) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    sum += gauss_legendre(fn, nodes[j], nodes[j + 1], breakpoints);
  }
  return sum;
}

/// Running integral from nodes.front() to each node.
template <class Fn>
std::vector<double> cumulative(Fn&& fn, std::span<const double> nodes,
                               std::span<const double> breakpoints = {}) {
  std::vector<double> out(nodes.size(), 0.0);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    out[j + 1] = out[j] + gauss_legendre(fn, nodes[j], nodes[j + 1], breakpoints);
  }
  return out;
}

}  // namespace dwdual::quad
