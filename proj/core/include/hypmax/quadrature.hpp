#pragma once

#include <span>
#include <vector>

namespace hypmax {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule. Safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int points);

enum class QuadratureScheme { CompositeGaussLegendre };

/// Node counts and panel layout for every quadrature path in the library.
///
/// Radial integrals are split at breakpoints and then into panels no wider
/// than `panel_width`; each panel gets a `radial_nodes`-point rule. Angular
/// integrals over [0, pi] use `angular_panels` panels of `angular_nodes`
/// points against the density sin^(n-2).
struct QuadratureSpec {
  int radial_nodes = 16;
  int angular_nodes = 12;
  int angular_panels = 4;
  double panel_width = 0.5;
  QuadratureScheme scheme = QuadratureScheme::CompositeGaussLegendre;

  void validate() const;
  QuadratureSpec doubled() const;
};

struct QuadNode {
  double x;
  double w;
};

/// Composite rule nodes on [a, b], split at the given breakpoints (those
/// outside (a, b) are ignored) and into panels of width <= max_width.
std::vector<QuadNode> composite_nodes(double a, double b, std::span<const double> breakpoints,
                                      int points, double max_width);

template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breakpoints, int points,
                 double max_width) {
  double acc = 0.0;
  for (const QuadNode& node : composite_nodes(a, b, breakpoints, points, max_width)) {
    acc += node.w * f(node.x);
  }
  return acc;
}

}  // namespace hypmax
