#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nle::quad {

/// Nodes and weights of a one-dimensional rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }

  void append(const Rule& other);
};

/// m-point Gauss-Legendre rule mapped to [a, b]. Nodes via Newton on the
/// three-term recurrence; exact for polynomials of degree 2m-1.
Rule gauss_legendre(std::size_t m, double a, double b);

/// Composite Gauss-Legendre over consecutive breakpoints.
Rule composite_gauss_legendre(std::span<const double> breakpoints, std::size_t per_panel);

/// Breakpoints a, a+(b-a)/p, ..., b.
std::vector<double> uniform_breaks(double a, double b, std::size_t panels);

/// Breaks graded geometrically towards a: a, a+(b-a)q^levels, ..., a+(b-a)q, b.
std::vector<double> graded_breaks(double a, double b, double ratio, std::size_t levels);

}  // namespace nle::quad
