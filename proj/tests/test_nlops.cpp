#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "nle/error.hpp"
#include "nle/nlops.hpp"
#include "nle/verification.hpp"

using namespace nle;

namespace {

constexpr double kPi = std::numbers::pi;

Rect unit(int n) {
  Rect r;
  r.n = n;
  r.hi = {1.0, n == 2 ? 1.0 : 0.0};
  return r;
}

FractionalParams calibrated(int n, double s = 0.5, double delta = 0.1) {
  return calibrate_a0(FractionalParams::make(n, s, delta));
}

// Vector bump (b, -b/2) centred in the unit square, with its analytic
// counterpart for the oracle.
struct TestBump {
  std::array<double, 2> c{0.5, 0.5};
  double R = 0.3;

  Field sampled(const Discretization& disc) const {
    const Field b = make_admissible_bump(std::span<const double>(c.data(), disc.grid.n), R, disc);
    Field u(disc.grid, disc.grid.n);
    for (std::size_t x = 0; x < u.nodes(); ++x) {
      u.at(x, 0) = b.at(x, 0);
      if (disc.grid.n == 2) u.at(x, 1) = -0.5 * b.at(x, 0);
    }
    return u;
  }

  SmoothField smooth(int n) const {
    SmoothField sf;
    sf.components = n;
    sf.center = c;
    sf.radius = R;
    sf.eval = [this, n](std::span<const double> x, std::span<double> out) {
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
      const double s = smoothstep(std::sqrt(r2) / R);
      out[0] = s;
      if (n == 2) out[1] = -0.5 * s;
    };
    return sf;
  }
};

// Nodes of every grid with h = 1/(16 k) that sample the bump, its edge and the
// region outside its support.
std::vector<std::array<double, 2>> sample_points(int n) {
  std::vector<std::array<double, 2>> pts;
  for (int i = 1; i < 16; i += 2)
    for (int j = 0; j < (n == 2 ? 16 : 1); j += 3) pts.push_back({i / 16.0, n == 2 ? j / 16.0 : 0.0});
  return pts;
}

std::size_t node_at(const Grid& g, const std::array<double, 2>& x) {
  std::size_t node = 0;
  for (int a = 0; a < g.n; ++a)
    node = node * g.shape[a] + static_cast<std::size_t>(std::lround((x[a] - g.origin[a]) / g.h));
  return node;
}

// Largest |spectral - oracle| over the sample points, relative to the largest
// oracle entry.
double oracle_defect(const Discretization& disc, const FractionalParams& p, Variant v,
                     double* oracle_error = nullptr) {
  const TestBump tb;
  const int n = disc.grid.n;
  const auto m = build_multipliers(disc.grid, p, v);
  const Field D = apply_grad(tb.sampled(disc), *m);
  const SmoothField sf = tb.smooth(n);
  double diff = 0.0, scale = 0.0, est = 0.0;
  for (const auto& x : sample_points(n)) {
    const std::size_t node = node_at(disc.grid, x);
    const OracleResult o = oracle_grad_point(sf, std::span<const double>(x.data(), n), p, v);
    for (int q = 0; q < n * n; ++q) {
      diff = std::max(diff, std::abs(o.value[q] - D.at(node, q)));
      scale = std::max(scale, std::abs(o.value[q]));
    }
    est = std::max(est, o.error_estimate);
  }
  if (oracle_error) *oracle_error = est / scale;
  return diff / scale;
}

}  // namespace

TEST(Multipliers, HalfSpectrumMatchesFullLattice) {
  for (Variant v : {Variant::nonlocal, Variant::fractional}) {
    const auto p = calibrated(2);
    const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
    const Grid& g = disc.grid;
    const auto m = build_multipliers(g, p, v);
    const auto full = full_lattice_symbol(g, p, v);
    const std::size_t half = g.shape[1] / 2 + 1;
    double worst = 0.0;
    for (std::size_t k = 0; k < m->size(); ++k) {
      const std::size_t i0 = k / half, i1 = k % half;
      const std::size_t node = i0 * g.shape[1] + i1;
      for (int j = 0; j < 2; ++j) {
        EXPECT_EQ(full[node * 2 + j].real(), 0.0);
        worst = std::max(worst, std::abs(full[node * 2 + j].imag() - m->grad_imag[k * 2 + j]));
      }
      EXPECT_NEAR(m->lap[k], -(m->grad_imag[2 * k] * m->grad_imag[2 * k] + m->grad_imag[2 * k + 1] * m->grad_imag[2 * k + 1]),
                  1e-12 * std::abs(m->lap[k]));
    }
    EXPECT_LT(worst, 1e-9);
    // Odd symmetry M(-xi) = -M(xi) on the full lattice, the Hermitian condition for an imaginary symbol.
    for (std::size_t i0 = 0; i0 < g.shape[0]; ++i0)
      for (std::size_t i1 = 0; i1 < g.shape[1]; ++i1) {
        const std::size_t a = i0 * g.shape[1] + i1;
        const std::size_t b = ((g.shape[0] - i0) % g.shape[0]) * g.shape[1] + (g.shape[1] - i1) % g.shape[1];
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(full[a * 2 + j].imag(), -full[b * 2 + j].imag(), 1e-9);
      }
  }
}

TEST(Multipliers, FractionalSymbolClosedForm) {
  const auto p = FractionalParams::make(2, 0.3, 0.1);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::fractional);
  for (std::size_t k = 1; k < m->size(); k += 7) {
    const double r = m->radius(k);
    for (int j = 0; j < 2; ++j) {
      if ((m->nyquist[k] >> j) & 1u) {
        EXPECT_EQ(m->grad_imag[k * 2 + j], 0.0);
        continue;
      }
      const double ref = 2.0 * kPi * m->xi[k * 2 + j] * std::pow(2.0 * kPi * r, p.s - 1.0);
      EXPECT_NEAR(m->grad_imag[k * 2 + j], ref, 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
  EXPECT_EQ(m->grad_imag[0], 0.0);
  EXPECT_EQ(m->qhat[0], 0.0);
}

TEST(Multipliers, NonlocalSymbolIsRadial) {
  const auto p = calibrated(2);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::nonlocal);
  const std::size_t half = disc.grid.shape[1] / 2 + 1;
  ASSERT_EQ(disc.grid.shape[0], disc.grid.shape[1]);
  // Lattice points (5, 0), (0, 5), (3, 4) and (-4, 3) share |xi|.
  const std::size_t N = disc.grid.shape[0];
  const std::size_t ks[] = {5 * half, 5, 3 * half + 4, (N - 4) * half + 3};
  const double ref = symbol_g(m->radius(ks[0]), p);
  for (std::size_t k : ks) {
    const double mag = std::hypot(m->grad_imag[2 * k], m->grad_imag[2 * k + 1]);
    EXPECT_NEAR(mag, ref, 1e-9 * ref);
  }
}

TEST(Multipliers, FractionalApproachesLocalAsSTendsToOne) {
  const auto p = FractionalParams::make(2, 0.99, 0.1);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::fractional);
  for (std::size_t k = 1; k < m->size(); k += 11) {
    // (2 pi |xi|)^{s-1} drifts from 1 at high frequency; the trend is checked up to |xi| = 10.
    if (m->nyquist[k] || m->radius(k) > 10.0) continue;
    const double mag = std::hypot(m->grad_imag[2 * k], m->grad_imag[2 * k + 1]);
    EXPECT_NEAR(mag / (2.0 * kPi * m->radius(k)), 1.0, 0.05);
  }
}

TEST(Multipliers, ThreadCountDoesNotChangeSymbols) {
  const auto p = calibrated(2);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  setenv("NLE_THREADS", "1", 1);
  const auto a = build_multipliers(disc.grid, p, Variant::nonlocal);
  setenv("NLE_THREADS", "4", 1);
  const auto b = build_multipliers(disc.grid, p, Variant::nonlocal);
  unsetenv("NLE_THREADS");
  EXPECT_EQ(a->grad_imag, b->grad_imag);
  EXPECT_GT(a->distinct_radii, 0u);
  EXPECT_GT(a->min_g, 0.0);
}

TEST(Operators, ConstantsAreAnnihilated) {
  const auto p = calibrated(2);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  for (Variant v : {Variant::nonlocal, Variant::fractional}) {
    const auto m = build_multipliers(disc.grid, p, v);
    Field u(disc.grid, 2);
    for (std::size_t x = 0; x < u.nodes(); ++x) {
      u.at(x, 0) = 3.0;
      u.at(x, 1) = -1.0;
    }
    EXPECT_LT(apply_grad(u, *m).max_abs(), 1e-13);
    EXPECT_LT(apply_div(u, *m).max_abs(), 1e-13);
  }
}

TEST(Operators, ShapeRulesAndErrors) {
  const auto p = calibrated(2);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::nonlocal);
  const Field s(disc.grid, 1), v(disc.grid, 2), M(disc.grid, 4);
  EXPECT_EQ(apply_grad(s, *m).components(), 2);
  EXPECT_EQ(apply_grad(v, *m).components(), 4);
  EXPECT_EQ(apply_div(v, *m).components(), 1);
  EXPECT_EQ(apply_div(M, *m).components(), 2);
  EXPECT_THROW(apply_div(s, *m), Error);
  const auto other = make_grid(unit(2), 1.0 / 40.0, p);
  EXPECT_THROW(apply_grad(Field(other.grid, 1), *m), Error);
  EXPECT_THROW(build_multipliers(disc.grid, FractionalParams::make(2, 0.5, 0.1), Variant::nonlocal), Error);
}

TEST(Operators, PointwiseAlgebra) {
  const auto disc = make_grid(unit(2), 1.0 / 32.0, calibrated(2));
  Field G(disc.grid, 4);
  for (std::size_t x = 0; x < G.nodes(); ++x)
    for (int q = 0; q < 4; ++q) G.at(x, q) = static_cast<double>(q + 1) + 0.01 * static_cast<double>(x % 7);
  const Field T = transpose(G);
  const Field S = sym_part(G);
  for (std::size_t x = 0; x < G.nodes(); x += 13) {
    EXPECT_EQ(T.at(x, 1), G.at(x, 2));
    EXPECT_EQ(S.at(x, 1), S.at(x, 2));
    EXPECT_EQ(trace(G).at(x, 0), G.at(x, 0) + G.at(x, 3));
  }
  const Field I = times_identity(trace(G));
  EXPECT_EQ(I.at(5, 1), 0.0);
  EXPECT_EQ(I.at(5, 0), I.at(5, 3));
}

TEST(Operators, LeakageOfBumpGradient) {
  // The symbols are the continuous transforms of the kernel, so the support
  // of D u is kept exactly only for band-limited u; for a sampled bump the
  // spill outside Omega is aliasing and falls off quickly with h.
  const auto p = calibrated(2);
  double leak[2];
  for (int k = 0; k < 2; ++k) {
    const auto disc = make_grid(unit(2), 1.0 / (64.0 * (k + 1)), p);
    const auto m = build_multipliers(disc.grid, p, Variant::nonlocal);
    leak[k] = leakage(apply_grad(TestBump{}.sampled(disc), *m), disc.masks.omega);
  }
  EXPECT_LT(leak[0], 1e-4);
  EXPECT_LT(leak[1], leak[0] / 50.0);
  const auto disc = make_grid(unit(2), 1.0 / 32.0, p);
  EXPECT_EQ(leakage(Field(disc.grid, 1), disc.masks.omega), 0.0);
}

TEST(Oracle, NonlocalAgreesWithSpectralGradient) {
  const auto p = calibrated(2);
  const auto disc = make_grid(unit(2), 1.0 / 64.0, p);
  double est = 0.0;
  const double d = oracle_defect(disc, p, Variant::nonlocal, &est);
  EXPECT_LT(d, 3e-4);
  EXPECT_LT(est, 1e-8);
}

TEST(Oracle, OneDimensional) {
  const auto p = calibrated(1, 0.4);
  const auto d64 = make_grid(unit(1), 1.0 / 64.0, p);
  const auto d256 = make_grid(unit(1), 1.0 / 256.0, p);
  const double e64 = oracle_defect(d64, p, Variant::nonlocal);
  const double e256 = oracle_defect(d256, p, Variant::nonlocal);
  EXPECT_LT(e256, e64);
  EXPECT_LT(e256, 1e-5);
}

TEST(Oracle, FractionalGapIsPeriodization) {
  // The spectral fractional gradient is periodic over the box while the
  // oracle integrates over the plane: the gap shrinks with the box, not with h.
  const auto p = FractionalParams::make(2, 0.5, 0.1);
  const double e1 = oracle_defect(make_grid(unit(2), 1.0 / 64.0, p, 1.0), p, Variant::fractional);
  const double e4 = oracle_defect(make_grid(unit(2), 1.0 / 64.0, p, 4.0), p, Variant::fractional);
  const double e1_fine = oracle_defect(make_grid(unit(2), 1.0 / 128.0, p, 1.0), p, Variant::fractional);
  EXPECT_LT(e4, 0.5 * e1);
  EXPECT_NEAR(e1_fine / e1, 1.0, 0.1);
}

TEST(Oracle, RejectsBadInput) {
  const auto p = calibrated(2);
  SmoothField sf = TestBump{}.smooth(2);
  const double x1[] = {0.5};
  EXPECT_THROW(oracle_grad_point(sf, x1, p, Variant::nonlocal), Error);
  const double x2[] = {0.5, 0.5};
  EXPECT_THROW(oracle_grad_point(sf, x2, FractionalParams::make(2, 0.5, 0.1), Variant::nonlocal), Error);
  sf.radius = 0.0;
  EXPECT_THROW(oracle_grad_point(sf, x2, p, Variant::fractional), Error);
}

TEST(Affine, ReproducedOnOmega) {
  const auto p = calibrated(2);
  const auto disc = make_grid(unit(2), 1.0 / 64.0, p, 4.0);
  const auto m = build_multipliers(disc.grid, p, Variant::nonlocal);
  const double F[] = {1.0, -0.5, 2.0, 0.25};
  const double a[] = {0.3, -0.2};
  EXPECT_LT(affine_defect(disc, *m, F, a), 1e-6);
  // A mis-scaled kernel reproduces F only up to the scaling.
  FractionalParams bad = p;
  bad.a0 *= 1.01;
  const auto mb = build_multipliers(disc.grid, bad, Variant::nonlocal);
  EXPECT_GT(affine_defect(disc, *mb, F, a), 5e-3);
}
