#include <cmath>
#include <numbers>

#include "nle/error.hpp"
#include "nle/report.hpp"
#include "nle/verification.hpp"

namespace nle {

double kernel_symbol(const KernelChoice& kernel, const MultiplierSet& m, std::size_t k) {
  if (kernel.kind == EringenKernel::qq) {
    if (m.variant != Variant::nonlocal) throw Error(Errc::domain, "QQ kernel needs nonlocal multipliers");
    return m.qhat[k] * m.qhat[k];
  }
  const double r = m.radius(k);
  if (r == 0.0) return 0.0;
  return std::pow(2.0 * std::numbers::pi * r, -kernel.alpha);
}

namespace {

using cd = std::complex<double>;

double spectral_form(const Field& v, const Field& w, const KernelChoice& kernel, const MultiplierSet& m,
                     const ElasticityTensor& C) {
  const int n = m.n();
  const Fft fft = m.fft();
  const std::size_t spec = fft.spectrum_size();
  const auto vh = transform(v, fft);
  const auto wh = transform(w, fft);
  std::vector<cd> ev(n * n), ew(n * n);
  std::vector<double> re(n * n), im(n * n), cre(n * n), cim(n * n);
  double acc = 0.0;
  for (std::size_t k = 0; k < spec; ++k) {
    const double a = kernel_symbol(kernel, m, k);
    if (a == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ev[i * n + j] = 0.5 * (m.local_grad(k, j) * vh[i * spec + k] + m.local_grad(k, i) * vh[j * spec + k]);
        ew[i * n + j] = 0.5 * (m.local_grad(k, j) * wh[i * spec + k] + m.local_grad(k, i) * wh[j * spec + k]);
      }
    for (int q = 0; q < n * n; ++q) {
      re[q] = ev[q].real();
      im[q] = ev[q].imag();
    }
    C.apply_general(re.data(), cre.data());
    C.apply_general(im.data(), cim.data());
    double pair = 0.0;
    for (int q = 0; q < n * n; ++q) pair += (cd(cre[q], cim[q]) * std::conj(ew[q])).real();
    acc += m.weight[k] * a * pair;
  }
  return acc * std::pow(m.grid.h, n) / static_cast<double>(m.grid.size());
}

// Fourth-order central differences, periodic indexing.
Field local_sym_gradient_fd(const Field& v) {
  const Grid& g = v.grid();
  const int n = g.n;
  Field out(g, n * n);
  Field D(g, n * n);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto idx = g.multi_index(x);
    for (int j = 0; j < n; ++j) {
      auto shifted = [&](long s) {
        auto id = idx;
        const long N = static_cast<long>(g.shape[j]);
        id[j] = static_cast<std::size_t>(((static_cast<long>(idx[j]) + s) % N + N) % N);
        return n == 1 ? id[0] : id[0] * g.shape[1] + id[1];
      };
      const std::size_t p1 = shifted(1), p2 = shifted(2), m1 = shifted(-1), m2 = shifted(-2);
      for (int i = 0; i < n; ++i)
        D.at(x, i * n + j) =
            (-v.at(p2, i) + 8.0 * v.at(p1, i) - 8.0 * v.at(m1, i) + v.at(m2, i)) / (12.0 * g.h);
    }
  }
  return sym_part(D);
}

// (1/|cell|) int_cell |x|^{alpha - n} dx for the cell [-h/2, h/2]^n.
double riesz_cell_average(double alpha, int n, double h) {
  const double a = 0.5 * h;
  if (n == 1) return 2.0 * std::pow(a, alpha) / alpha / h;
  const quad::Rule rule = quad::gauss_legendre(64, 0.0, 0.25 * std::numbers::pi);
  const double ang = rule.integrate([&](double t) { return std::pow(a / std::cos(t), alpha) / alpha; });
  return 8.0 * ang / (h * h);
}

double realspace_form(const Field& v, const Field& w, const KernelChoice& kernel, const MultiplierSet& m,
                      const ElasticityTensor& C, const Discretization& disc) {
  const Grid& g = disc.grid;
  const int n = g.n;
  const std::vector<std::size_t> nodes = mask_nodes(disc.masks.omega);
  const double cap = std::pow(32.0, n);
  if (static_cast<double>(nodes.size()) > cap)
    throw Error(Errc::grid_too_large, "real-space Eringen path is limited to 32^n nodes in Omega");

  const Field sv = apply_C(local_sym_gradient_fd(v), C);
  const Field ew = local_sym_gradient_fd(w);

  // Kernel samples by node offset.
  std::vector<double> kernel_grid;
  if (kernel.kind == EringenKernel::qq) {
    const Fft fft = m.fft();
    std::vector<cd> ah(fft.spectrum_size());
    for (std::size_t k = 0; k < ah.size(); ++k) ah[k] = kernel_symbol(kernel, m, k);
    kernel_grid.resize(g.size());
    fft.inverse(ah, kernel_grid);
    for (double& x : kernel_grid) x /= std::pow(g.h, n);
  }
  const double gam = kernel.kind == EringenKernel::riesz ? gamma_alpha(kernel.alpha, n) : 1.0;
  const double self = kernel.kind == EringenKernel::riesz ? riesz_cell_average(kernel.alpha, n, g.h) / gam : 0.0;

  auto kernel_at = [&](std::size_t x, std::size_t y) {
    const auto ix = g.multi_index(x);
    const auto iy = g.multi_index(y);
    if (kernel.kind == EringenKernel::qq) {
      std::array<std::size_t, 2> d{};
      for (int a = 0; a < n; ++a) d[a] = (ix[a] + g.shape[a] - iy[a]) % g.shape[a];
      return kernel_grid[n == 1 ? d[0] : d[0] * g.shape[1] + d[1]];
    }
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = (static_cast<double>(ix[a]) - static_cast<double>(iy[a])) * g.h;
      r2 += d * d;
    }
    if (r2 == 0.0) return self;
    return std::pow(std::sqrt(r2), kernel.alpha - n) / gam;
  };

  double acc = 0.0;
  for (std::size_t x : nodes)
    for (std::size_t y : nodes) {
      double pair = 0.0;
      for (int q = 0; q < n * n; ++q) pair += sv.at(x, q) * ew.at(y, q);
      if (pair != 0.0) acc += kernel_at(x, y) * pair;
    }
  return acc * std::pow(g.h, 2 * n);
}

}  // namespace

double eringen_form(const Field& v, const Field& w, const KernelChoice& kernel, EringenPath path,
                    const MultiplierSet& m, const ElasticityTensor& C, const Discretization& disc) {
  if (!(v.grid() == m.grid) || !(w.grid() == m.grid)) throw Error(Errc::shape_mismatch, "fields off the multiplier grid");
  if (!is_admissible(v, disc.masks) || !is_admissible(w, disc.masks))
    throw Error(Errc::support_violation, "Eringen form needs admissible fields");
  if (kernel.kind == EringenKernel::riesz && !(kernel.alpha > 0.0 && kernel.alpha < m.n()))
    throw Error(Errc::domain, "Riesz order must lie in (0, n)");
  if (path == EringenPath::spectral) return spectral_form(v, w, kernel, m, C);
  return realspace_form(v, w, kernel, m, C, disc);
}

namespace {

double form_scale(double avv, double aww) { return std::sqrt(std::abs(avv) * std::abs(aww)); }

struct KernelCase {
  const char* name;
  Variant variant;
  KernelChoice kernel;
};

std::vector<KernelCase> kernel_cases(const FractionalParams& p) {
  const double alpha = 2.0 * (1.0 - p.s);
  if (!(alpha < p.n)) throw Error(Errc::domain, "Riesz order 2(1 - s) must be below n");
  return {{"qq", Variant::nonlocal, {EringenKernel::qq, 0.0}},
          {"riesz", Variant::fractional, {EringenKernel::riesz, alpha}}};
}

std::string eringen_params(const FractionalParams& p, double h, const char* kernel, std::uint64_t seed) {
  return param_string({{"n", std::to_string(p.n)},
                       {"s", format_double(p.s)},
                       {"delta", format_double(p.delta)},
                       {"h", format_double(h)},
                       {"kernel", kernel},
                       {"seed", std::to_string(seed)}});
}

}  // namespace

Report eringen_suite(const Rect& omega, double h, const FractionalParams& p_in, const EringenOptions& opt) {
  const FractionalParams p = p_in.calibrated() ? p_in : calibrate_a0(p_in);
  const int n = p.n;
  const ElasticityTensor C = ElasticityTensor::isotropic(n, opt.moduli);
  const Discretization disc = make_grid(omega, h, p);
  Report rep;
  for (const KernelCase& kc : kernel_cases(p)) {
    const std::string base = eringen_params(p, h, kc.name, opt.seed);
    const auto m = build_multipliers(disc.grid, p, kc.variant);
    // The double integral runs over all of space; the exact discrete partner
    // is the form over the whole periodic box.
    DirichletProblem pb = DirichletProblem::make(disc, p, kc.variant, C, {}, {}, m);
    pb.region.assign(disc.grid.size(), 1);
    Rng rng(opt.seed);
    for (std::size_t t = 0; t < opt.pairs; ++t) {
      const Field v = random_bump_field(disc, n, rng);
      const Field w = random_bump_field(disc, n, rng);
      const double a = bilinear_a(v, w, pb);
      const double e = eringen_form(v, w, kc.kernel, EringenPath::spectral, *m, C, disc);
      const double scale = form_scale(bilinear_a(v, v, pb), bilinear_a(w, w, pb));
      rep.at_most(std::string("eringen_") + kc.name + "_spectral", base + ";pair=" + std::to_string(t),
                  std::abs(e - a) / scale, 1e-11);
    }
    const MercerReport mr = mercer_check(kc.kernel, *m, disc, opt.mercer_trials, opt.seed);
    rep.at_least(std::string("mercer_") + kc.name + "_min_symbol", base, mr.min_symbol, 0.0);
    double min_form = mr.forms.empty() ? 0.0 : mr.forms.front();
    for (double q : mr.forms) min_form = std::min(min_form, q);
    rep.flag(std::string("mercer_") + kc.name + "_forms", base + ";trials=" + std::to_string(mr.forms.size()),
             min_form, 0.0, mr.pass);
  }

  if (opt.realspace_h > 0.0) {
    FractionalParams pc = p;
    if (opt.realspace_delta > 0.0) {
      pc.delta = opt.realspace_delta;
      pc = calibrate_a0(pc);
    }
    const Discretization coarse = make_grid(opt.realspace_omega, opt.realspace_h, pc);
    for (const KernelCase& kc : kernel_cases(pc)) {
      const std::string base = eringen_params(pc, opt.realspace_h, kc.name, opt.seed);
      const auto m = build_multipliers(coarse.grid, pc, kc.variant);
      const DirichletProblem pb = DirichletProblem::make(coarse, pc, kc.variant, C, {}, {}, m);
      Rng rng(opt.seed);
      for (std::size_t t = 0; t < opt.realspace_pairs; ++t) {
        const Field v = random_bump_field(coarse, n, rng);
        const Field w = random_bump_field(coarse, n, rng);
        const double a = bilinear_a(v, w, pb);
        const double e = eringen_form(v, w, kc.kernel, EringenPath::realspace, *m, C, coarse);
        const double scale = form_scale(bilinear_a(v, v, pb), bilinear_a(w, w, pb));
        rep.at_most(std::string("eringen_") + kc.name + "_realspace", base + ";pair=" + std::to_string(t),
                    std::abs(e - a) / scale, 0.1);
      }
    }
  }
  return rep;
}

}  // namespace nle
