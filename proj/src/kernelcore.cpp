#include "nle/kernelcore.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "nle/error.hpp"

namespace nle {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

double step_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

std::string to_string(Variant v) { return v == Variant::nonlocal ? "nonlocal" : "fractional"; }

Variant parse_variant(const std::string& name) {
  if (name == "nonlocal") return Variant::nonlocal;
  if (name == "fractional") return Variant::fractional;
  throw Error(Errc::domain, "unknown variant '" + name + "'");
}

FractionalParams FractionalParams::make(int n, double s, double delta, double b0) {
  FractionalParams p;
  p.n = n;
  p.s = s;
  p.delta = delta;
  p.b0 = b0;
  p.validate();
  return p;
}

void FractionalParams::validate() const {
  if (n != 1 && n != 2) throw Error(Errc::domain, "dimension must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw Error(Errc::domain, "s must lie in (0, 1)");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(Errc::domain, "delta must be positive");
  if (!(b0 > 0.0 && b0 < 1.0)) throw Error(Errc::domain, "b0 must lie in (0, 1)");
  if (a0 < 0.0 || !std::isfinite(a0)) throw Error(Errc::domain, "a0 must be nonnegative");
}

double gamma_alpha(double alpha, int n) {
  if (n < 1) throw Error(Errc::domain, "dimension must be positive");
  const double nd = static_cast<double>(n);
  if (!(alpha > 0.0 && alpha < nd)) throw Error(Errc::domain, "gamma_alpha needs 0 < alpha < n");
  return std::pow(kPi, 0.5 * nd) * std::exp2(alpha) * std::tgamma(0.5 * alpha) /
         std::tgamma(0.5 * (nd - alpha));
}

double c_ns(const FractionalParams& p) {
  p.validate();
  return (p.n - 1 + p.s) / gamma_alpha(1.0 - p.s, p.n);
}

double sphere_area(int n) {
  const double nd = static_cast<double>(n);
  return 2.0 * std::pow(kPi, 0.5 * nd) / std::tgamma(0.5 * nd);
}

KernelConstants kernel_constants(const FractionalParams& p) {
  p.validate();
  KernelConstants k;
  k.gamma_s = gamma_alpha(p.s, p.n);
  k.gamma_1ms = gamma_alpha(1.0 - p.s, p.n);
  k.c_ns = (p.n - 1 + p.s) / k.gamma_1ms;
  k.sphere_area = sphere_area(p.n);
  return k;
}

double smoothstep(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = step_exp(1.0 - t);
  return a / (step_exp(t) + a);
}

double cutoff_profile(double r, const FractionalParams& p) {
  const double rb = p.b0 * p.delta;
  if (r <= rb) return 1.0;
  if (r >= p.delta) return 0.0;
  return smoothstep((r - rb) / ((1.0 - p.b0) * p.delta));
}

double cutoff_w(double r, const FractionalParams& p) {
  if (!p.calibrated()) throw Error(Errc::domain, "cutoff_w needs calibrated params");
  return p.a0 * cutoff_profile(r, p);
}

quad::Rule radial_rule(const FractionalParams& p, double phase_budget, std::size_t refine) {
  constexpr std::size_t kPerPanel = 20;
  const double s = p.s;
  const double rb = p.b0 * p.delta;
  const double a = std::max(phase_budget, 0.0);
  refine = std::max<std::size_t>(refine, 1);

  // Plateau: r = rb * tau^{1/(1-s)} turns r^{-s} dr into rb^{1-s}/(1-s) dtau.
  const std::size_t p_plateau =
      refine * (2 + static_cast<std::size_t>(std::ceil(a * p.b0 / (1.0 - s) / 4.0)));
  std::vector<double> breaks = quad::graded_breaks(0.0, 1.0 / static_cast<double>(p_plateau), 0.25, 10);
  const auto rest = quad::uniform_breaks(1.0 / static_cast<double>(p_plateau), 1.0, p_plateau - 1);
  if (p_plateau > 1) breaks.insert(breaks.end(), rest.begin() + 1, rest.end());
  const quad::Rule tau = quad::composite_gauss_legendre(breaks, kPerPanel);

  quad::Rule out;
  const double jac = std::pow(rb, 1.0 - s) / (1.0 - s);
  const double expo = 1.0 / (1.0 - s);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out.nodes.push_back(rb * std::pow(tau.nodes[i], expo));
    out.weights.push_back(jac * tau.weights[i]);
  }

  // Transition annulus: smooth integrand, weight r^{-s} applied directly.
  const std::size_t p_trans =
      refine * (6 + static_cast<std::size_t>(std::ceil(a * (1.0 - p.b0) / 4.0)));
  const auto tb = quad::uniform_breaks(rb, p.delta, p_trans);
  const quad::Rule tr = quad::composite_gauss_legendre(tb, kPerPanel);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out.nodes.push_back(tr.nodes[i]);
    out.weights.push_back(tr.weights[i] * std::pow(tr.nodes[i], -s));
  }
  return out;
}

namespace {

double profile_integral(const FractionalParams& p, std::size_t refine) {
  const quad::Rule rule = radial_rule(p, 0.0, refine);
  return rule.integrate([&](double r) { return cutoff_profile(r, p); });
}

}  // namespace

FractionalParams calibrate_a0(FractionalParams p, CalibrationReport* report) {
  p.a0 = 0.0;
  p.validate();
  const double coarse = profile_integral(p, 1);
  const double fine = profile_integral(p, 2);
  const double err = std::abs(fine - coarse) / std::abs(fine);
  if (err > 1e-11)
    throw Error(Errc::quadrature, "calibration quadrature did not converge (estimate " +
                                      std::to_string(err) + ")");
  const double target = p.n / c_ns(p);
  p.a0 = target / (sphere_area(p.n) * coarse);
  if (report) {
    report->a0 = p.a0;
    report->profile_integral = coarse;
    report->error_estimate = err;
  }
  return p;
}

double normalization_integral(const FractionalParams& p) {
  if (!p.calibrated()) throw Error(Errc::domain, "normalization needs calibrated params");
  return sphere_area(p.n) * p.a0 * profile_integral(p, 1);
}

double rho_l1_norm(const FractionalParams& p) {
  if (!p.calibrated()) throw Error(Errc::domain, "rho norm needs calibrated params");
  // ||rho||_1 = sigma / gamma(1-s) * int_0^delta w(r) r^{-s} dr, split at the plateau edge.
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double rb = p.b0 * p.delta;
  auto f = [&](double r) { return p.a0 * cutoff_profile(r, p) * std::pow(r, -p.s); };
  const double inner = integrator.integrate(f, 0.0, rb);
  const double outer = integrator.integrate(f, rb, p.delta);
  return sphere_area(p.n) * (inner + outer) / gamma_alpha(1.0 - p.s, p.n);
}

double riesz_kernel(double alpha, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  const double r = norm(x);
  if (r == 0.0) throw Error(Errc::singularity, "Riesz kernel evaluated at the origin");
  return std::pow(r, alpha - n) / gamma_alpha(alpha, n);
}

std::optional<double> riesz_symbol(double alpha, std::span<const double> xi) {
  const double r = norm(xi);
  if (r == 0.0) return std::nullopt;
  return std::pow(2.0 * kPi * r, -alpha);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kAngularStep = 8;

std::size_t angular_nodes(double phase) {
  return 16 + kAngularStep * static_cast<std::size_t>(std::ceil(phase / kAngularStep));
}

}  // namespace

SymbolEvaluator::SymbolEvaluator(const FractionalParams& p, double rho_max)
    : params_(p), rho_max_(rho_max), c_ns_(c_ns(p)) {
  if (!p.calibrated()) throw Error(Errc::domain, "symbol evaluation needs calibrated params");
  if (!(rho_max >= 0.0)) throw Error(Errc::domain, "rho_max must be nonnegative");
  const double phase = 2.0 * kPi * rho_max * p.delta;
  if (phase > 1e3)
    throw Error(Errc::quadrature, "requested frequency exceeds the resolvable oscillation budget");
  for (double b = 8.0;; b *= 2.0) {
    budgets_.push_back(b);
    quad::Rule r = radial_rule(p, b);
    for (std::size_t i = 0; i < r.size(); ++i)
      r.weights[i] *= p.a0 * cutoff_profile(r.nodes[i], p) / r.nodes[i];
    radial_.push_back(std::move(r));
    if (b >= phase) break;
  }
  if (p.n == 2) {
    const std::size_t levels = (angular_nodes(phase) - 16) / kAngularStep + 1;
    for (std::size_t k = 0; k < levels; ++k) {
      const std::size_t m = 16 + k * kAngularStep;
      angular_.push_back(quad::gauss_legendre(m, 0.0, 0.5 * kPi));
      circle_.push_back(quad::gauss_legendre(4 * m, 0.0, 2.0 * kPi));
    }
  }
}

const quad::Rule& SymbolEvaluator::radial_for(double phase) const {
  for (std::size_t k = 0; k < budgets_.size(); ++k)
    if (phase <= budgets_[k]) return radial_[k];
  return radial_.back();
}

const quad::Rule& SymbolEvaluator::angular_for(double phase) const {
  const std::size_t k = (angular_nodes(phase) - 16) / kAngularStep;
  return angular_[std::min(k, angular_.size() - 1)];
}

double SymbolEvaluator::evaluate(double rho, double sign) const {
  // g = c_ns int_0^delta w(r) r^{-s-1} A(2 pi rho r) dr with
  // A(a) = int_{S^{n-1}} sin(a theta.e) (theta.e) dtheta.
  const double phase = 2.0 * kPi * rho * params_.delta;
  const quad::Rule& radial = radial_for(phase);
  double acc = 0.0;
  if (params_.n == 1) {
    for (std::size_t j = 0; j < radial.size(); ++j)
      acc += radial.weights[j] * 2.0 * std::sin(2.0 * kPi * rho * radial.nodes[j]);
    return c_ns_ * acc;
  }
  const std::size_t level = (angular_nodes(phase) - 16) / kAngularStep;
  const quad::Rule& ang = sign > 0.0 ? angular_for(phase) : circle_[std::min(level, circle_.size() - 1)];
  std::vector<double> cosines(ang.size());
  for (std::size_t k = 0; k < ang.size(); ++k) cosines[k] = sign * std::cos(ang.nodes[k]);
  const double fold = sign > 0.0 ? 4.0 : 1.0;
  for (std::size_t j = 0; j < radial.size(); ++j) {
    const double a = 2.0 * kPi * rho * radial.nodes[j];
    double inner = 0.0;
    for (std::size_t k = 0; k < ang.size(); ++k) inner += ang.weights[k] * std::sin(a * cosines[k]) * cosines[k];
    acc += radial.weights[j] * fold * inner;
  }
  return c_ns_ * acc;
}

double SymbolEvaluator::g(double rho) const {
  if (rho < 0.0) throw Error(Errc::domain, "frequency magnitude must be nonnegative");
  if (rho == 0.0) return 0.0;
  if (rho > rho_max_ * (1.0 + 1e-12))
    throw Error(Errc::quadrature, "frequency beyond the rule's oscillation budget");
  return evaluate(rho, 1.0);
}

double SymbolEvaluator::g_reflected(double rho) const {
  if (rho == 0.0) return 0.0;
  if (rho > rho_max_ * (1.0 + 1e-12))
    throw Error(Errc::quadrature, "frequency beyond the rule's oscillation budget");
  return evaluate(rho, -1.0);
}

double SymbolEvaluator::qhat(double rho) const {
  if (rho == 0.0) return 1.0;
  return g(rho) / (2.0 * kPi * rho);
}

double symbol_g(double rho, const FractionalParams& p) { return SymbolEvaluator(p, rho).g(rho); }

double qhat(double rho, const FractionalParams& p) { return SymbolEvaluator(p, rho).qhat(rho); }

RadialSymbol tabulate_symbol(const FractionalParams& p, double rho_max, std::size_t count) {
  if (count < 2) throw Error(Errc::domain, "symbol table needs at least two samples");
  const SymbolEvaluator eval(p, rho_max);
  RadialSymbol out;
  out.rho_samples.resize(count);
  out.g_values.resize(count);
  out.qhat_values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double rho = rho_max * static_cast<double>(i) / static_cast<double>(count - 1);
    out.rho_samples[i] = rho;
    out.g_values[i] = eval.g(rho);
    out.qhat_values[i] = eval.qhat(rho);
  }
  return out;
}

}  // namespace nle
