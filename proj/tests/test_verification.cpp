#include <gtest/gtest.h>

#include <cmath>

#include "nle/error.hpp"
#include "nle/verification.hpp"

using namespace nle;

namespace {

FractionalParams params(int n = 2, double s = 0.5, double delta = 0.1) {
  return calibrate_a0(FractionalParams::make(n, s, delta));
}

std::string failures(const Report& r) {
  std::string out;
  for (const auto& row : r.rows)
    if (!row.pass) out += row.check + " " + row.params + " value=" + format_double(row.value) + "\n";
  return out;
}

const CheckRow* find_row(const Report& r, const std::string& name) {
  for (const auto& row : r.rows)
    if (row.check == name) return &row;
  return nullptr;
}

}  // namespace

TEST(Report, CsvSchemaAndPassLogic) {
  Report r;
  r.at_most("a", "x=1", 0.5, 1.0);
  r.at_least("b", "", 0.5, 1.0);
  r.flag("c", "", 1.0, 0.0, true);
  EXPECT_EQ(r.failures(), 1u);
  EXPECT_FALSE(r.pass());
  const std::string csv = r.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,params,value,tolerance,pass");
  EXPECT_NE(csv.find("a,x=1,0.5,1,true"), std::string::npos);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Identities, SuitePassesForBothVariants) {
  for (Variant v : {Variant::nonlocal, Variant::fractional}) {
    SuiteOptions opt;
    opt.fields = 3;
    opt.affine_trials = 1;
    const Report r = identity_suite(Rect{}, 1.0 / 64.0, params(), v, opt);
    EXPECT_TRUE(r.pass()) << failures(r);
    EXPECT_NE(find_row(r, "weak_strong"), nullptr);
    EXPECT_NE(find_row(r, "form_symmetry"), nullptr);
  }
}

TEST(Identities, OneDimensionalSuitePasses) {
  Rect r;
  r.n = 1;
  r.hi = {1.0, 0.0};
  SuiteOptions opt;
  opt.fields = 3;
  const Report rep = identity_suite(r, 1.0 / 64.0, params(1, 0.3), Variant::nonlocal, opt);
  EXPECT_TRUE(rep.pass()) << failures(rep);
}

TEST(Identities, MiscalibratedKernelIsCaught) {
  SuiteOptions opt;
  opt.fields = 2;
  opt.affine_trials = 1;
  opt.a0_scale = 1.01;
  const Report r = identity_suite(Rect{}, 1.0 / 32.0, params(), Variant::nonlocal, opt);
  EXPECT_FALSE(r.pass());
  const CheckRow* affine = find_row(r, "affine_reproduction");
  ASSERT_NE(affine, nullptr);
  EXPECT_FALSE(affine->pass);
}

TEST(Identities, DeterministicForFixedSeed) {
  SuiteOptions opt;
  opt.fields = 2;
  opt.affine_trials = 1;
  const auto a = identity_suite(Rect{}, 1.0 / 32.0, params(), Variant::fractional, opt).csv();
  const auto b = identity_suite(Rect{}, 1.0 / 32.0, params(), Variant::fractional, opt).csv();
  EXPECT_EQ(a, b);
}

TEST(Korn, DenseOracleMatchesLanczosOnSmallGrid) {
  // h = 1/19 and delta = 0.16 leave 12 free nodes per axis (i = 4..15).
  const auto p = params(2, 0.5, 0.16);
  const auto disc = make_grid(Rect{}, 1.0 / 19.0, p);
  ASSERT_EQ(count(disc.masks.omega_minus), 144u);
  for (Variant v : {Variant::nonlocal, Variant::fractional}) {
    const auto m = build_multipliers(disc.grid, p, v);
    const ConstantEstimate d = korn_constant(disc, p, v, EigenMethod::dense, m);
    const ConstantEstimate l = korn_constant(disc, p, v, EigenMethod::lanczos, m);
    EXPECT_EQ(d.method, "dense");
    EXPECT_EQ(l.method, "lanczos");
    EXPECT_EQ(d.dim, 288u);
    EXPECT_NEAR(l.value, d.value, 1e-6);
    EXPECT_GE(d.value, 0.5 - 1e-6);
    EXPECT_LE(d.value, 1.0);
    // The pencil minimizer realizes the quotient.
    EXPECT_NEAR(korn_quotient(l.mode, *m, norm_region(disc, v)), l.value, 1e-8);
  }
}

TEST(Korn, PythagoreanBoundOnRandomFields) {
  const auto p = params();
  const auto disc = make_grid(Rect{}, 1.0 / 32.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::fractional);
  const auto region = norm_region(disc, Variant::fractional);
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    const double q = korn_quotient(random_bump_field(disc, 2, rng), *m, region);
    EXPECT_GE(q, 0.5 - 1e-12);
    EXPECT_LE(q, 1.0 + 1e-12);
  }
}

TEST(Korn, OneDimensionalConstantIsOne) {
  Rect r;
  r.n = 1;
  r.hi = {1.0, 0.0};
  const auto p = params(1);
  const auto disc = make_grid(r, 1.0 / 64.0, p);
  const ConstantEstimate k = korn_constant(disc, p, Variant::nonlocal, EigenMethod::dense);
  EXPECT_NEAR(k.value, 1.0, 1e-12);
}

TEST(Poincare, PositiveAndConsistentAcrossMethods) {
  const auto p = params(2, 0.5, 0.16);
  const auto disc = make_grid(Rect{}, 1.0 / 19.0, p);
  for (Variant v : {Variant::nonlocal, Variant::fractional}) {
    const ConstantEstimate d = poincare_constant(disc, p, v, EigenMethod::dense);
    const ConstantEstimate l = poincare_constant(disc, p, v, EigenMethod::lanczos);
    EXPECT_GT(d.lambda_min, 0.0);
    EXPECT_NEAR(l.lambda_min / d.lambda_min, 1.0, 1e-8);
    EXPECT_NEAR(d.value, 1.0 / std::sqrt(d.lambda_min), 1e-12 * d.value);
    EXPECT_LT(l.pencil_residual, 1e-8);
  }
}

TEST(Poincare, BoundedByFieldQuotients) {
  const auto p = params();
  const auto disc = make_grid(Rect{}, 1.0 / 32.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::nonlocal);
  const ConstantEstimate c = poincare_constant(disc, p, Variant::nonlocal, EigenMethod::automatic, m);
  EXPECT_GT(c.value, 0.0);
  Rng rng(17);
  for (int t = 0; t < 5; ++t)
    EXPECT_GE(poincare_quotient(random_bump_field(disc, 2, rng), *m, norm_region(disc, Variant::nonlocal)),
              c.lambda_min * (1.0 - 1e-10));
}

TEST(Mercer, KernelsAreNonNegative) {
  const auto p = params();
  const auto disc = make_grid(Rect{}, 1.0 / 32.0, p);
  const auto mn = build_multipliers(disc.grid, p, Variant::nonlocal);
  const auto mf = build_multipliers(disc.grid, p, Variant::fractional);
  const MercerReport qq = mercer_check({EringenKernel::qq, 0.0}, *mn, disc, 20, 3);
  const MercerReport rz = mercer_check({EringenKernel::riesz, 1.0}, *mf, disc, 20, 3);
  for (const auto* r : {&qq, &rz}) {
    EXPECT_TRUE(r->pass);
    EXPECT_GE(r->min_symbol, 0.0);
    EXPECT_EQ(r->negative, 0u);
    EXPECT_EQ(r->forms.size(), 20u);
    for (double f : r->forms) EXPECT_GE(f, 0.0);
  }
  EXPECT_GT(rz.min_symbol, 0.0);
}

TEST(Eringen, SpectralSuitePasses) {
  EringenOptions opt;
  opt.pairs = 3;
  opt.mercer_trials = 10;
  const Report r = eringen_suite(Rect{}, 1.0 / 32.0, params(2, 0.6), opt);
  EXPECT_TRUE(r.pass()) << failures(r);
  EXPECT_NE(find_row(r, "eringen_qq_spectral"), nullptr);
  EXPECT_NE(find_row(r, "eringen_riesz_spectral"), nullptr);
}

TEST(Eringen, RealSpacePathRefusesLargeGrids) {
  const auto p = params();
  const auto disc = make_grid(Rect{}, 1.0 / 64.0, p);
  const auto m = build_multipliers(disc.grid, p, Variant::nonlocal);
  Rng rng(1);
  const Field v = random_bump_field(disc, 2, rng);
  const auto C = ElasticityTensor::isotropic(2, {});
  try {
    eringen_form(v, v, {EringenKernel::qq, 0.0}, EringenPath::realspace, *m, C, disc);
    ADD_FAILURE() << "expected grid_too_large";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::grid_too_large);
  }
  EXPECT_GT(eringen_form(v, v, {EringenKernel::qq, 0.0}, EringenPath::spectral, *m, C, disc), 0.0);
}

TEST(Eringen, FractionalOrderMustStayBelowDimension) {
  Rect r;
  r.n = 1;
  r.hi = {1.0, 0.0};
  // alpha = 2 (1 - s) = 1.2 >= n = 1.
  EXPECT_THROW(eringen_suite(r, 1.0 / 64.0, params(1, 0.4)), Error);
}
