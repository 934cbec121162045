#include <algorithm>
#include <cmath>
#include <numbers>

#include "nle/error.hpp"
#include "nle/nlops.hpp"

namespace nle {

namespace {

constexpr double kPi = std::numbers::pi;

// Radial rule for int_a^b F(r) r^{-s} dr (weights include r^{-s}).
quad::Rule far_rule(double a, double b, double s, std::size_t panels) {
  constexpr std::size_t kPerPanel = 20;
  const quad::Rule base = quad::composite_gauss_legendre(quad::uniform_breaks(a, b, panels), kPerPanel);
  quad::Rule out = base;
  for (std::size_t i = 0; i < out.size(); ++i) out.weights[i] *= std::pow(out.nodes[i], -s);
  return out;
}

// Same integral with a = 0: r = b tau^{1/(1-s)} removes the endpoint weight.
quad::Rule near_rule(double b, double s, std::size_t panels) {
  constexpr std::size_t kPerPanel = 20;
  std::vector<double> breaks = quad::graded_breaks(0.0, 1.0 / static_cast<double>(panels), 0.25, 10);
  const auto rest = quad::uniform_breaks(1.0 / static_cast<double>(panels), 1.0, panels - 1);
  if (panels > 1) breaks.insert(breaks.end(), rest.begin() + 1, rest.end());
  const quad::Rule tau = quad::composite_gauss_legendre(breaks, kPerPanel);
  quad::Rule out;
  const double jac = std::pow(b, 1.0 - s) / (1.0 - s);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out.nodes.push_back(b * std::pow(tau.nodes[i], 1.0 / (1.0 - s)));
    out.weights.push_back(jac * tau.weights[i]);
  }
  return out;
}

// c_ns * sum_r W_r phi(r)/r * int_S 1/2 (u(x + r theta) - u(x - r theta)) (x) theta.
std::vector<double> polar_sum(const SmoothField& u, std::span<const double> x, int n, const quad::Rule& radial,
                              std::function<double(double)> weight, std::size_t angular, double cns) {
  const int c = u.components;
  std::vector<double> acc(static_cast<std::size_t>(c * n), 0.0);
  std::vector<double> plus(c), minus(c);
  std::array<double, 2> xp{}, xm{};
  // Half circle with the trapezoid rule; the integrand is pi-periodic.
  std::vector<std::array<double, 2>> dirs;
  double dtheta = 0.0;
  if (n == 1) {
    dirs.push_back({1.0, 0.0});
    dtheta = 2.0;  // two points of S^0, folded
  } else {
    dtheta = 2.0 * kPi / static_cast<double>(angular);
    for (std::size_t k = 0; k < angular; ++k) {
      const double t = kPi * static_cast<double>(k) / static_cast<double>(angular);
      dirs.push_back({std::cos(t), std::sin(t)});
    }
  }
  for (std::size_t q = 0; q < radial.size(); ++q) {
    const double r = radial.nodes[q];
    const double wr = radial.weights[q] * weight(r) / r;
    if (wr == 0.0) continue;
    for (const auto& th : dirs) {
      for (int a = 0; a < n; ++a) {
        xp[a] = x[a] + r * th[a];
        xm[a] = x[a] - r * th[a];
      }
      u.eval(std::span<const double>(xp.data(), n), plus);
      u.eval(std::span<const double>(xm.data(), n), minus);
      for (int i = 0; i < c; ++i) {
        const double d = 0.5 * (plus[i] - minus[i]) * wr * dtheta;
        for (int j = 0; j < n; ++j) acc[i * n + j] += d * th[j];
      }
    }
  }
  for (double& v : acc) v *= cns;
  return acc;
}

std::vector<double> oracle_once(const SmoothField& u, std::span<const double> x, const FractionalParams& p,
                                Variant v, std::size_t angular, std::size_t refine) {
  const int n = p.n;
  const double cns = c_ns(p);
  if (v == Variant::nonlocal) {
    const quad::Rule radial = radial_rule(p, 32.0, refine);
    return polar_sum(u, x, n, radial, [&](double r) { return cutoff_w(r, p); }, angular, cns);
  }
  double dist = 0.0;
  for (int a = 0; a < n; ++a) dist += (x[a] - u.center[a]) * (x[a] - u.center[a]);
  dist = std::sqrt(dist);
  const double r_out = dist + u.radius;
  const double r_in = std::max(0.0, dist - u.radius);
  const std::size_t panels = refine * (4 + static_cast<std::size_t>(std::ceil(8.0 * (r_out - r_in) / u.radius)));
  const quad::Rule radial = r_in > 0.0 ? far_rule(r_in, r_out, p.s, panels) : near_rule(r_out, p.s, panels);
  return polar_sum(u, x, n, radial, [](double) { return 1.0; }, angular, cns);
}

}  // namespace

OracleResult oracle_grad_point(const SmoothField& u, std::span<const double> x, const FractionalParams& p,
                               Variant v, std::size_t angular) {
  if (static_cast<int>(x.size()) != p.n) throw Error(Errc::shape_mismatch, "oracle point dimension");
  if (v == Variant::nonlocal && !p.calibrated()) throw Error(Errc::domain, "oracle needs calibrated params");
  if (v == Variant::fractional && !(u.radius > 0.0))
    throw Error(Errc::domain, "fractional oracle needs the support radius of u");
  OracleResult res;
  res.value = oracle_once(u, x, p, v, angular, 1);
  const std::vector<double> fine = oracle_once(u, x, p, v, 2 * angular, 2);
  for (std::size_t i = 0; i < fine.size(); ++i)
    res.error_estimate = std::max(res.error_estimate, std::abs(fine[i] - res.value[i]));
  res.value = fine;
  return res;
}

}  // namespace nle
