#pragma once

// Constants, cutoff function, radial kernels and operator symbols of the
// truncated nonlocal gradient and of the Riesz fractional gradient.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nle/quadrature.hpp"

namespace nle {

enum class Variant { nonlocal, fractional };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Everything that determines the kernels: dimension n, order s, horizon
/// delta, plateau fraction b0 and the calibrated plateau height a0.
struct FractionalParams {
  int n = 2;
  double s = 0.5;
  double delta = 0.1;
  double b0 = 0.5;
  double a0 = 0.0;  // set by calibrate_a0; 0 means "not calibrated"

  /// Validated construction (a0 left uncalibrated).
  static FractionalParams make(int n, double s, double delta, double b0 = 0.5);

  bool calibrated() const noexcept { return a0 > 0.0; }
  void validate() const;
};

struct KernelConstants {
  double gamma_s = 0.0;
  double gamma_1ms = 0.0;
  double c_ns = 0.0;
  double sphere_area = 0.0;
};

/// pi^{n/2} 2^alpha Gamma(alpha/2) / Gamma((n-alpha)/2), for 0 < alpha < n.
double gamma_alpha(double alpha, int n);

/// (n-1+s) / gamma(1-s).
double c_ns(const FractionalParams& p);

/// Surface measure of the unit sphere S^{n-1}.
double sphere_area(int n);

KernelConstants kernel_constants(const FractionalParams& p);

/// C-infinity smoothstep: 1 for t <= 0, 0 for t >= 1, S(1-t)/(S(t)+S(1-t))
/// in between with S(t) = exp(-1/t).
double smoothstep(double t);

/// Unit-height cutoff profile (plateau then smoothstep transition to zero at delta).
double cutoff_profile(double r, const FractionalParams& p);

/// w_delta(r) = a0 * cutoff_profile(r). Requires calibrated params.
double cutoff_w(double r, const FractionalParams& p);

struct CalibrationReport {
  double a0 = 0.0;
  double profile_integral = 0.0;  // int_0^delta profile(r) r^{-s} dr
  double error_estimate = 0.0;    // relative, from a doubled rule
};

/// Rule for int_0^delta F(r) r^{-s} dr with smooth F: the plateau part uses
/// r = r_b tau^{1/(1-s)}, the transition part is integrated directly.
/// `phase_budget` is the largest oscillation 2 pi rho delta to resolve.
quad::Rule radial_rule(const FractionalParams& p, double phase_budget, std::size_t refine = 1);

/// Sets a0 so that int_{B(0,delta)} w(z) |z|^{-(n+s-1)} dz = n / c_{n,s}.
/// Throws Errc::quadrature if the relative error estimate exceeds 1e-11.
FractionalParams calibrate_a0(FractionalParams p, CalibrationReport* report = nullptr);

/// int_{B(0,delta)} w(z) |z|^{-(n+s-1)} dz, via the calibration rule.
double normalization_integral(const FractionalParams& p);

/// ||rho_delta||_{L^1}, evaluated with tanh-sinh quadrature directly in r so
/// that it is independent of the calibration rule.
double rho_l1_norm(const FractionalParams& p);

/// I_alpha(x) = |x|^{alpha-n} / gamma(alpha); singular at x = 0.
double riesz_kernel(double alpha, std::span<const double> x);

/// |2 pi xi|^{-alpha}; nullopt marks the zero mode.
std::optional<double> riesz_symbol(double alpha, std::span<const double> xi);

/// Evaluates the scalar symbol g(rho) of the nonlocal gradient for many
/// frequencies with one precomputed polar rule. Immutable after construction.
class SymbolEvaluator {
 public:
  SymbolEvaluator(const FractionalParams& p, double rho_max);

  double g(double rho) const;
  /// g(rho) / (2 pi rho) with the continuous extension 1 at rho = 0.
  double qhat(double rho) const;
  /// g evaluated along the unit direction -e instead of e (parity check).
  double g_reflected(double rho) const;

  double rho_max() const noexcept { return rho_max_; }
  const FractionalParams& params() const noexcept { return params_; }

 private:
  // Rules are sized for oscillation budgets 8, 16, 32, ...; each frequency
  // uses the smallest radial level and angular rule covering its phase.
  const quad::Rule& radial_for(double phase) const;
  const quad::Rule& angular_for(double phase) const;
  double evaluate(double rho, double sign) const;

  FractionalParams params_;
  double rho_max_;
  double c_ns_;
  std::vector<double> budgets_;
  std::vector<quad::Rule> radial_;   // weights include a0 * profile(r) * r^{-s} / r
  std::vector<quad::Rule> angular_;  // theta over [0, pi/2] for n = 2, folded by symmetry
  std::vector<quad::Rule> circle_;   // unfolded circle, used for the reflected direction
};

/// Scalar symbol g(rho) (single evaluation; builds a rule for this rho).
double symbol_g(double rho, const FractionalParams& p);

/// g(rho)/(2 pi rho), 1 at rho = 0.
double qhat(double rho, const FractionalParams& p);

/// Sampled radial symbol table.
struct RadialSymbol {
  std::vector<double> rho_samples;
  std::vector<double> g_values;
  std::vector<double> qhat_values;
};

RadialSymbol tabulate_symbol(const FractionalParams& p, double rho_max, std::size_t count);

}  // namespace nle
