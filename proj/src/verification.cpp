#include "nle/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nle/error.hpp"

namespace nle {

Field random_bump_field(const Discretization& disc, int components, Rng& rng) {
  const Grid& g = disc.grid;
  double half = 0.5 * (disc.omega.side(0) - 2.0 * disc.delta);
  if (g.n == 2) half = std::min(half, 0.5 * (disc.omega.side(1) - 2.0 * disc.delta));
  Field out(g, components);
  for (int c = 0; c < components; ++c) {
    const int count = rng.integer(3, 7);
    for (int b = 0; b < count; ++b) {
      const double radius = rng.uniform(0.3, 0.9) * half;
      std::array<double, 2> center{};
      for (int a = 0; a < g.n; ++a) {
        const double lo = disc.omega.lo[a] + disc.delta + radius;
        const double hi = disc.omega.hi[a] - disc.delta - radius;
        center[a] = rng.uniform(lo, hi);
      }
      const double amp = rng.uniform(-1.0, 1.0);
      const Field bump = make_admissible_bump(std::span<const double>(center.data(), g.n), radius * (1.0 - 1e-9), disc);
      for (std::size_t x = 0; x < g.size(); ++x) out.at(x, c) += amp * bump.at(x, 0);
    }
  }
  return out;
}

std::vector<std::uint8_t> norm_region(const Discretization& disc, Variant v) {
  if (v == Variant::nonlocal) return disc.masks.omega;
  return std::vector<std::uint8_t>(disc.grid.size(), 1);
}

namespace {

std::size_t dense_limit(int n) { return n == 1 ? 20 : 400; }

// Start vector for the Korn pencil: v = (d2 psi, -d1 psi) with the local
// spectral derivative. M is parallel to xi, so v^ . M = 0 and v lies in the
// near-1/2 eigenspace; from a random start Lanczos would have to filter a
// continuum of eigenvalues just above 1/2. psi is a high-power polynomial
// bump on Omega_{-delta}, smooth enough that the truncated derivative tail
// stays near rounding. In 1D a random start suffices.
std::vector<double> korn_start(const Discretization& disc, const MultiplierSet& m, const AdmissibleSpace& space) {
  if (disc.grid.n != 2) return {};
  const Grid& g = disc.grid;
  Field psi(g, 1);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto pt = g.point(x);
    double val = 1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * (1.3 * pt[0] + 0.7 * pt[1]));
    for (int a = 0; a < 2; ++a) {
      const double lo = disc.omega.lo[a] + disc.delta;
      const double hi = disc.omega.hi[a] - disc.delta;
      const double t = (pt[a] - lo) * (hi - pt[a]);
      val *= t > 0.0 ? std::pow(4.0 * t / ((hi - lo) * (hi - lo)), 16) : 0.0;
    }
    psi.at(x, 0) = val;
  }
  const Fft fft = m.fft();
  const std::size_t spec = fft.spectrum_size();
  const auto ph = transform(psi, fft);
  Field v(g, 2);
  std::vector<std::complex<double>> buf(spec);
  std::vector<double> out(g.size());
  for (int c = 0; c < 2; ++c) {
    const int axis = c == 0 ? 1 : 0;
    const double sign = c == 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < spec; ++k) buf[k] = sign * m.local_grad(k, axis) * ph[k];
    fft.inverse(buf, out);
    v.set_component(c, out);
  }
  std::vector<double> x = space.restrict(v);
  // A little noise keeps every eigendirection reachable from the start.
  Rng rng(11);
  double scale = 0.0;
  for (double e : x) scale = std::max(scale, std::abs(e));
  for (double& e : x) e += 1e-6 * scale * rng.uniform(-1.0, 1.0);
  return x;
}

ConstantEstimate pencil_estimate(const Discretization& disc, const FractionalParams& p, Variant v,
                                 EigenMethod method, std::shared_ptr<const MultiplierSet> m, bool korn) {
  if (!m) m = build_multipliers(disc.grid, p, v);
  const int n = disc.grid.n;
  const AdmissibleSpace space(disc, n);
  if (space.dim() < static_cast<std::size_t>(2 * n))
    throw Error(Errc::domain, "admissible space too small for the constant");
  const auto region = norm_region(disc, v);
  const LinearOperator G = gram_operator(space, m, region, GramKind::gradient);
  LinearOperator A, B, P;
  if (korn) {
    A = gram_operator(space, m, region, GramKind::sym_gradient);
    B = G;
    P = spectral_preconditioner(space, m, 0.5, 1.0);
  } else {
    A = G;
    B.dim = space.dim();
    B.apply = [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); };
    P = spectral_preconditioner(space, m, 1.0, 1.0);
  }
  if (method == EigenMethod::automatic)
    method = space.nodes().size() > dense_limit(n) ? EigenMethod::lanczos : EigenMethod::dense;

  EigenResult er;
  if (method == EigenMethod::dense) {
    er = dense_smallest(A, B);
  } else {
    EigenOptions opt;
    if (korn) opt.start = korn_start(disc, *m, space);
    opt.tolerance = 1e-10;
    er = lanczos_smallest(A, B, &P, opt, Errc::operator_not_injective);
  }
  if (!(er.lambda > 0.0)) throw Error(Errc::operator_not_injective, "nonpositive pencil eigenvalue");
  ConstantEstimate ce;
  ce.lambda_min = er.lambda;
  ce.value = korn ? er.lambda : 1.0 / std::sqrt(er.lambda);
  ce.pencil_residual = er.residual;
  ce.method = method == EigenMethod::dense ? "dense" : "lanczos";
  ce.dim = space.dim();
  ce.steps = er.steps;
  ce.grid = disc.grid;
  ce.params = p;
  ce.variant = v;
  ce.mode = space.extend(er.vector);
  return ce;
}

}  // namespace

ConstantEstimate korn_constant(const Discretization& disc, const FractionalParams& p, Variant v, EigenMethod method,
                               std::shared_ptr<const MultiplierSet> m) {
  return pencil_estimate(disc, p, v, method, std::move(m), true);
}

ConstantEstimate poincare_constant(const Discretization& disc, const FractionalParams& p, Variant v,
                                   EigenMethod method, std::shared_ptr<const MultiplierSet> m) {
  return pencil_estimate(disc, p, v, method, std::move(m), false);
}

double korn_quotient(const Field& v, const MultiplierSet& m, std::span<const std::uint8_t> region) {
  const Field G = apply_grad(v, m);
  const Field S = sym_part(G);
  return inner_product(S, S, region) / inner_product(G, G, region);
}

double poincare_quotient(const Field& v, const MultiplierSet& m, std::span<const std::uint8_t> region) {
  const Field G = apply_grad(v, m);
  return inner_product(G, G, region) / inner_product(v, v);
}

// ---------------------------------------------------------------------------

MercerReport mercer_check(const KernelChoice& kernel, const MultiplierSet& m, const Discretization& disc,
                          std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(Errc::domain, "mercer check needs at least one trial");
  MercerReport rep;
  rep.seed = seed;
  rep.min_symbol = std::numeric_limits<double>::infinity();
  rep.max_symbol = -rep.min_symbol;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (kernel.kind == EringenKernel::riesz && m.radius(k) == 0.0) continue;
    const double a = kernel_symbol(kernel, m, k);
    rep.min_symbol = std::min(rep.min_symbol, a);
    rep.max_symbol = std::max(rep.max_symbol, a);
    if (a < 0.0) ++rep.negative;
  }
  Rng rng(seed);
  const Fft fft = m.fft();
  const double scale = std::pow(m.grid.h, m.grid.n) / static_cast<double>(m.grid.size());
  bool forms_positive = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const Field psi = random_bump_field(disc, 1, rng);
    const auto ph = transform(psi, fft);
    double q = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) q += m.weight[k] * kernel_symbol(kernel, m, k) * std::norm(ph[k]);
    q *= scale;
    rep.forms.push_back(q);
    forms_positive = forms_positive && q > 0.0;
  }
  rep.pass = rep.negative == 0 && rep.max_symbol > 0.0 && forms_positive;
  return rep;
}

// ---------------------------------------------------------------------------

double relative_defect(const Field& a, const Field& b) {
  if (!a.compatible(b)) throw Error(Errc::shape_mismatch, "defect of incompatible fields");
  double d = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) d = std::max(d, std::abs(av[i] - bv[i]));
  const double scale = std::max(a.max_abs(), b.max_abs());
  return scale > 0.0 ? d / scale : d;
}

double affine_defect(const Discretization& disc, const MultiplierSet& m, std::span<const double> F,
                     std::span<const double> a) {
  const int n = disc.grid.n;
  Field u = make_affine(F, a, disc.grid);
  const Field plateau = make_plateau(disc);
  for (std::size_t x = 0; x < u.nodes(); ++x)
    for (int c = 0; c < n; ++c) u.at(x, c) *= plateau.at(x, 0);
  const Field D = apply_grad(u, m);
  double fnorm = 0.0;
  for (double f : F) fnorm += f * f;
  fnorm = std::sqrt(fnorm);
  double worst = 0.0;
  for (std::size_t x = 0; x < D.nodes(); ++x) {
    if (!disc.masks.omega[x]) continue;
    double e = 0.0;
    for (int q = 0; q < n * n; ++q) e += (D.at(x, q) - F[q]) * (D.at(x, q) - F[q]);
    worst = std::max(worst, std::sqrt(e));
  }
  return worst / fnorm;
}

namespace {

std::string base_params(const FractionalParams& p, double h, Variant v, std::uint64_t seed) {
  return param_string({{"n", std::to_string(p.n)},
                       {"s", format_double(p.s)},
                       {"delta", format_double(p.delta)},
                       {"b0", format_double(p.b0)},
                       {"h", format_double(h)},
                       {"variant", to_string(v)},
                       {"seed", std::to_string(seed)}});
}

double pair_scale(double avv, double aww) { return std::sqrt(std::abs(avv) * std::abs(aww)); }

}  // namespace

Report identity_suite(const Rect& omega, double h, const FractionalParams& p_in, Variant v, const SuiteOptions& opt) {
  FractionalParams p = p_in.calibrated() ? p_in : calibrate_a0(p_in);
  p.a0 *= opt.a0_scale;
  const int n = p.n;
  const Discretization disc = make_grid(omega, h, p);
  const auto m = build_multipliers(disc.grid, p, v);
  const std::string base = base_params(p, h, v, opt.seed);
  const ElasticityTensor C = ElasticityTensor::isotropic(n, {1.0, 1.0});
  const ElasticityTensor Cg = ElasticityTensor::general_from(n, {1.0, 1.0});
  const DirichletProblem pb = DirichletProblem::make(disc, p, v, C, {}, {}, m);
  const DirichletProblem pbg = DirichletProblem::make(disc, p, v, Cg, {}, {}, m);
  // The strong operator is the whole-box one; its exact weak partner is the
  // form over the box, not over Omega.
  DirichletProblem pb_box = pb;
  pb_box.region.assign(disc.grid.size(), 1);
  const std::vector<std::uint8_t> box(disc.grid.size(), 1);

  Report rep;
  Rng rng(opt.seed);
  for (std::size_t f = 0; f < opt.fields; ++f) {
    const std::string params = base + ";field=" + std::to_string(f);
    const Field u = random_bump_field(disc, 1, rng);
    const Field vv = random_bump_field(disc, n, rng);
    const Field phi = random_bump_field(disc, n, rng);
    const Field w = random_bump_field(disc, n, rng);

    const Field Dv = apply_grad(vv, *m);
    const Field divv = apply_div(vv, *m);
    rep.at_most("trace", params, relative_defect(trace(Dv), divv), 1e-12);
    rep.at_most("div_transpose", params, relative_defect(apply_div(transpose(Dv), *m), apply_grad(divv, *m)), 1e-12);
    rep.at_most("laplacian_scalar", params,
                relative_defect(apply_laplacian(u, *m), apply_div(apply_grad(u, *m), *m)), 1e-12);
    rep.at_most("laplacian_vector", params, relative_defect(apply_laplacian(vv, *m), apply_div(Dv, *m)), 1e-12);
    if (v == Variant::fractional)
      rep.at_most("div_of_div_identity", params,
                  relative_defect(apply_div(times_identity(divv), *m), apply_grad(divv, *m)), 1e-12);

    // Integration by parts: <D u, phi> = -<u, div phi>.
    const Field Du = apply_grad(u, *m);
    const Field divphi = apply_div(phi, *m);
    for (const auto& [name, mask] : {std::pair{"ibp_omega", &disc.masks.omega}, std::pair{"ibp_box", &box}}) {
      const double lhs = inner_product(Du, phi, *mask);
      const double rhs = -inner_product(u, divphi, *mask);
      const double scale = std::sqrt(inner_product(Du, Du, *mask) * inner_product(phi, phi, *mask));
      rep.at_most(name, params, std::abs(lhs - rhs) / scale, 1e-11);
    }

    const Field S = sym_part(Dv);
    rep.at_most("sym_idempotent", params, relative_defect(sym_part(S), S), 0.0);

    // Elasticity forms.
    const double avw = bilinear_a(vv, w, pb);
    const double awv = bilinear_a(w, vv, pb);
    const double scale = pair_scale(bilinear_a(vv, vv, pb), bilinear_a(w, w, pb));
    rep.at_most("form_symmetry", params, std::abs(avw - awv) / scale, 1e-12);
    rep.at_most("form_isotropic_expansion", params, std::abs(bilinear_a_isotropic(vv, w, pb) - avw) / scale, 1e-12);
    rep.at_most("form_general_tensor", params, std::abs(bilinear_a(vv, w, pbg) - avw) / scale, 1e-12);
    {
      const double al = rng.uniform(-2.0, 2.0), be = rng.uniform(-2.0, 2.0);
      Field combo = al * vv;
      combo += be * phi;
      const double lhs = bilinear_a(combo, w, pb);
      const double rhs = al * avw + be * bilinear_a(phi, w, pb);
      const double sc = (std::abs(al) * std::sqrt(bilinear_a(vv, vv, pb)) +
                         std::abs(be) * std::sqrt(bilinear_a(phi, phi, pb))) *
                        std::sqrt(bilinear_a(w, w, pb));
      rep.at_most("form_bilinearity", params, std::abs(lhs - rhs) / sc, 1e-12);
    }
    rep.at_most("stress_general_tensor", params, relative_defect(apply_C(S, Cg), apply_C(S, C)), 1e-14);
    const Field strong_iso = strong_apply(vv, pb, StrongPath::isotropic);
    const Field strong_gen = strong_apply(vv, pb, StrongPath::general);
    rep.at_most("strong_paths", params, relative_defect(strong_iso, strong_gen), 1e-11);
    rep.at_most("weak_strong", params,
                std::abs(inner_product(strong_gen, w, disc.masks.omega_minus) - bilinear_a(vv, w, pb_box)) / scale,
                1e-10);
  }

  if (v == Variant::nonlocal) {
    const Discretization wide = make_grid(omega, h, p, opt.affine_padding);
    const auto mw = build_multipliers(wide.grid, p, v);
    for (std::size_t t = 0; t < opt.affine_trials; ++t) {
      std::vector<double> F(n * n), a(n);
      for (double& x : F) x = rng.uniform(-2.0, 2.0);
      for (double& x : a) x = rng.uniform(-1.0, 1.0);
      rep.at_most("affine_reproduction",
                  base + ";padding=" + format_double(opt.affine_padding) + ";trial=" + std::to_string(t),
                  affine_defect(wide, *mw, F, a), 1e-6);
    }
    const SymbolEvaluator eval(p, 1e-4);
    rep.at_most("qhat_at_zero", base + ";rho=0.0001", std::abs(eval.qhat(1e-4) - 1.0), 1e-9);
  }
  return rep;
}

}  // namespace nle
