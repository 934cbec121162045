#include "nle/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "nle/error.hpp"

namespace nle::quad {

void Rule::append(const Rule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

// P_m(x) and P_m'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(std::size_t m, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= m; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const double dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

Rule gauss_legendre(std::size_t m, double a, double b) {
  if (m == 0) throw Error(Errc::domain, "Gauss-Legendre rule needs at least one node");
  Rule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  if (m == 1) {
    rule.nodes[0] = mid;
    rule.weights[0] = 2.0 * half;
    return rule;
  }
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(m) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(m, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[m - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[m - 1 - i] = half * w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = mid;
  return rule;
}

Rule composite_gauss_legendre(std::span<const double> breakpoints, std::size_t per_panel) {
  Rule out;
  if (breakpoints.size() < 2) return out;
  const Rule ref = gauss_legendre(per_panel, 0.0, 1.0);
  out.nodes.reserve((breakpoints.size() - 1) * per_panel);
  out.weights.reserve((breakpoints.size() - 1) * per_panel);
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double len = breakpoints[p + 1] - a;
    for (std::size_t i = 0; i < per_panel; ++i) {
      out.nodes.push_back(a + len * ref.nodes[i]);
      out.weights.push_back(len * ref.weights[i]);
    }
  }
  return out;
}

std::vector<double> uniform_breaks(double a, double b, std::size_t panels) {
  std::vector<double> out(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  out.back() = b;
  return out;
}

std::vector<double> graded_breaks(double a, double b, double ratio, std::size_t levels) {
  std::vector<double> out;
  out.reserve(levels + 2);
  out.push_back(a);
  for (std::size_t k = levels; k >= 1; --k) out.push_back(a + (b - a) * std::pow(ratio, static_cast<double>(k)));
  out.push_back(b);
  return out;
}

}  // namespace nle::quad
