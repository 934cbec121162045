#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "nle/error.hpp"
#include "nle/kernelcore.hpp"

using namespace nle;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent of the library rules: adaptive Gauss-Kronrod on panels split
// at the plateau edge, with the r^{-s} endpoint handled by tanh-sinh.
double oracle_g(double rho, const FractionalParams& p) {
  const double rb = p.b0 * p.delta;
  // A(a) / a, finite at a = 0, keeps the integrand at r^{-s}.
  auto A_over_a = [&](double a) {
    if (a < 1e-8) return p.n == 1 ? 2.0 : kPi;
    if (p.n == 1) return 2.0 * std::sin(a) / a;
    return 2.0 * kPi * std::cyl_bessel_j(1.0, a) / a;
  };
  const double k = 2.0 * kPi * rho;
  auto f = [&](double r) { return cutoff_w(r, p) * std::pow(r, -p.s) * k * A_over_a(k * r); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double near = ts.integrate(f, 0.0, rb);
  const double far = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, rb, p.delta, 12, 1e-13);
  return c_ns(p) * (near + far);
}

FractionalParams calibrated(int n, double s, double delta) {
  return calibrate_a0(FractionalParams::make(n, s, delta));
}

}  // namespace

TEST(Constants, GammaAlphaMatchesClosedForm) {
  EXPECT_NEAR(gamma_alpha(1.0, 2), 2.0 * kPi, 1e-13);
  EXPECT_NEAR(gamma_alpha(0.5, 1), std::sqrt(2.0 * kPi), 1e-13);
  EXPECT_NEAR(gamma_alpha(0.5, 2), 13.145047206596875, 1e-12);
  EXPECT_THROW(gamma_alpha(2.0, 2), Error);
  EXPECT_THROW(gamma_alpha(0.0, 1), Error);
}

TEST(Constants, CnsAndSphereArea) {
  const auto p = FractionalParams::make(2, 0.5, 0.1);
  EXPECT_NEAR(c_ns(p), 0.5 * 3.0 / gamma_alpha(0.5, 2), 1e-15);
  EXPECT_NEAR(c_ns(p), 0.1141114198, 1e-10);
  EXPECT_NEAR(sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(sphere_area(2), 2.0 * kPi, 1e-15);
  const KernelConstants k = kernel_constants(p);
  EXPECT_DOUBLE_EQ(k.gamma_s, k.gamma_1ms);
}

TEST(Params, ValidationRejectsOutOfRange) {
  EXPECT_THROW(FractionalParams::make(2, 1.0, 0.1), Error);
  EXPECT_THROW(FractionalParams::make(2, 0.0, 0.1), Error);
  EXPECT_THROW(FractionalParams::make(3, 0.5, 0.1), Error);
  EXPECT_THROW(FractionalParams::make(2, 0.5, -0.1), Error);
  EXPECT_THROW(FractionalParams::make(2, 0.5, 0.1, 1.0), Error);
  try {
    FractionalParams::make(2, 1.0, 0.1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::domain);
  }
}

TEST(Cutoff, SmoothstepShape) {
  EXPECT_EQ(smoothstep(-1.0), 1.0);
  EXPECT_EQ(smoothstep(0.0), 1.0);
  EXPECT_EQ(smoothstep(1.0), 0.0);
  EXPECT_NEAR(smoothstep(0.5), 0.5, 1e-15);
  for (double t = 0.05; t < 1.0; t += 0.05) {
    EXPECT_NEAR(smoothstep(t) + smoothstep(1.0 - t), 1.0, 1e-15);
    EXPECT_LT(smoothstep(t + 0.01), smoothstep(t));
  }
  const auto p = calibrated(2, 0.5, 0.1);
  EXPECT_EQ(cutoff_w(0.04, p), p.a0);
  EXPECT_EQ(cutoff_w(0.1, p), 0.0);
  EXPECT_THROW(cutoff_w(0.01, FractionalParams::make(2, 0.5, 0.1)), Error);
}

TEST(Calibration, FrozenPlateauHeight) {
  CalibrationReport rep;
  const auto p = calibrate_a0(FractionalParams::make(2, 0.5, 0.1), &rep);
  EXPECT_NEAR(p.a0, 5.100534861805415, 1e-12);
  EXPECT_LT(rep.error_estimate, 1e-11);
}

TEST(Calibration, IndependentQuadratureOracle) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int n : {1, 2})
    for (double s : {0.25, 0.5, 0.75})
      for (double d : {0.05, 0.1}) {
        const auto p0 = FractionalParams::make(n, s, d);
        const double rb = p0.b0 * d;
        auto f = [&](double r) { return cutoff_profile(r, p0) * std::pow(r, -s); };
        const double I = ts.integrate(f, 0.0, rb) +
                         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, rb, d, 12, 1e-13);
        const double expected = n / c_ns(p0) / (sphere_area(n) * I);
        EXPECT_NEAR(calibrate_a0(p0).a0 / expected, 1.0, 1e-11) << n << " " << s << " " << d;
      }
}

TEST(Normalization, RhoL1MatchesClosedForm) {
  for (int n : {1, 2})
    for (double s : {0.25, 0.5, 0.75})
      for (double d : {0.05, 0.1}) {
        const auto p = calibrated(n, s, d);
        EXPECT_NEAR(rho_l1_norm(p), n / (n - 1.0 + s), 1e-9);
        EXPECT_NEAR(normalization_integral(p), n / c_ns(p), 1e-11 * n / c_ns(p));
      }
}

TEST(Symbol, MatchesBesselOracle) {
  for (int n : {1, 2})
    for (double s : {0.25, 0.75}) {
      const auto p = calibrated(n, s, 0.1);
      const SymbolEvaluator eval(p, 200.0);
      for (double rho : {0.01, 0.3, 2.0, 17.0, 64.0, 199.0}) {
        const double ref = oracle_g(rho, p);
        EXPECT_NEAR(eval.g(rho), ref, 1e-10 * std::max(1.0, std::abs(ref))) << n << " " << s << " " << rho;
        EXPECT_NEAR(symbol_g(rho, p), ref, 1e-10 * std::max(1.0, std::abs(ref)));
      }
    }
}

TEST(Symbol, FrozenQhatValues) {
  const auto p = calibrated(2, 0.5, 0.1);
  const SymbolEvaluator eval(p, 60.0);
  const double rho[] = {1e-3, 0.1, 1.0, 5.0, 20.0, 60.0};
  const double ref[] = {0.99999999432, 0.99994316, 0.99434649, 0.87579820, 0.45556193, 0.26268980};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(eval.qhat(rho[i]), ref[i], 5e-9) << rho[i];
  EXPECT_EQ(eval.qhat(0.0), 1.0);
  EXPECT_EQ(eval.g(0.0), 0.0);
}

TEST(Symbol, ParityAndRange) {
  const auto p = calibrated(2, 0.5, 0.1);
  const SymbolEvaluator eval(p, 50.0);
  for (double rho : {0.5, 7.0, 33.0}) EXPECT_NEAR(eval.g_reflected(rho), eval.g(rho), 1e-12 * eval.g(rho));
  EXPECT_THROW(eval.g(51.0), Error);
  EXPECT_THROW(eval.g(-1.0), Error);
  EXPECT_THROW(SymbolEvaluator(FractionalParams::make(2, 0.5, 0.1), 10.0), Error);
}

TEST(Symbol, QhatTendsToOneAtZero) {
  const auto p = calibrated(2, 0.5, 0.1);
  EXPECT_NEAR(qhat(1e-4, p), 1.0, 1e-9);
  // qhat(0) = 1 is the normalization n / c_ns expressed in Fourier variables.
  const auto p1 = calibrated(1, 0.3, 0.05);
  EXPECT_NEAR(qhat(1e-4, p1), 1.0, 1e-9);
}

TEST(Symbol, TableIsUniformAndMonotoneAtLowFrequency) {
  const auto p = calibrated(2, 0.5, 0.1);
  const RadialSymbol t = tabulate_symbol(p, 10.0, 11);
  ASSERT_EQ(t.rho_samples.size(), 11u);
  EXPECT_EQ(t.rho_samples.front(), 0.0);
  EXPECT_EQ(t.rho_samples.back(), 10.0);
  for (std::size_t i = 1; i < 11; ++i) EXPECT_GT(t.g_values[i], t.g_values[i - 1]);
}

TEST(Riesz, KernelAndSymbol) {
  const double x[] = {0.3, 0.4};
  EXPECT_NEAR(riesz_kernel(1.0, x), std::pow(0.5, -1.0) / gamma_alpha(1.0, 2), 1e-15);
  const double zero[] = {0.0, 0.0};
  EXPECT_THROW(riesz_kernel(1.0, zero), Error);
  EXPECT_FALSE(riesz_symbol(1.0, zero).has_value());
  const double xi[] = {3.0, 4.0};
  EXPECT_NEAR(*riesz_symbol(0.5, xi), std::pow(2.0 * kPi * 5.0, -0.5), 1e-15);
}

TEST(Riesz, FourierPairOracle) {
  // int I_alpha(x) e^{-pi |x|^2} dx = |S^1| int_0^inf r^{alpha-1} e^{-pi r^2} dr / gamma
  // equals int |2 pi xi|^{-alpha} e^{-pi |xi|^2} dxi by Parseval with the Gaussian.
  const double alpha = 0.8;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double lhs = 2.0 * kPi *
                     ts.integrate([&](double r) { return std::pow(r, alpha - 1.0) * std::exp(-kPi * r * r); }, 0.0,
                                  std::numeric_limits<double>::infinity()) /
                     gamma_alpha(alpha, 2);
  const double rhs =
      2.0 * kPi *
      ts.integrate([&](double r) { return std::pow(2.0 * kPi * r, -alpha) * r * std::exp(-kPi * r * r); }, 0.0,
                   std::numeric_limits<double>::infinity());
  EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
}
