#include "nle/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace nle {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult pcg(const LinearOperator& A, const LinearOperator* M, std::span<const double> b, std::span<double> x,
             const CgOptions& opt) {
  const std::size_t dim = A.dim;
  if (b.size() != dim || x.size() != dim) throw Error(Errc::shape_mismatch, "CG vector sizes");
  CgResult res;
  std::fill(x.begin(), x.end(), 0.0);
  const double bnorm = norm2(b);
  if (opt.keep_history) {
    res.residual_history.push_back(bnorm > 0.0 ? 1.0 : 0.0);
    res.energy_history.push_back(0.0);
  }
  if (bnorm == 0.0) {
    res.converged = true;
    res.best.assign(dim, 0.0);
    return res;
  }
  std::vector<double> r(b.begin(), b.end()), z(dim), p(dim), ap(dim);
  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (M)
      M->apply(in, out);
    else
      std::copy(in.begin(), in.end(), out.begin());
  };
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  res.best.assign(dim, 0.0);
  res.best_residual = 1.0;
  res.relative_residual = 1.0;
  for (std::size_t k = 0; k < opt.max_iterations; ++k) {
    A.apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      res.indefinite = true;
      if (opt.throw_on_indefinite)
        throw Error(opt.on_indefinite, "negative or zero curvature p.Ap = " + std::to_string(pap));
      break;
    }
    const double a = rz / pap;
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] += a * p[i];
      r[i] -= a * ap[i];
    }
    res.iterations = k + 1;
    res.relative_residual = norm2(r) / bnorm;
    if (opt.keep_history) {
      res.residual_history.push_back(res.relative_residual);
      res.energy_history.push_back(-0.5 * dot(b, x));
    }
    if (res.relative_residual < res.best_residual) {
      res.best_residual = res.relative_residual;
      res.best.assign(x.begin(), x.end());
    }
    if (res.relative_residual <= opt.tolerance) {
      res.converged = true;
      break;
    }
    precondition(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < dim; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

// ---------------------------------------------------------------------------

AdmissibleSpace::AdmissibleSpace(const Discretization& disc, int components, std::vector<std::size_t> order)
    : grid_(disc.grid), components_(components) {
  std::vector<std::size_t> free = mask_nodes(disc.masks.omega_minus);
  if (order.empty()) {
    nodes_ = std::move(free);
    return;
  }
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != free) throw Error(Errc::shape_mismatch, "free-node order is not a permutation of Omega_{-delta}");
  nodes_ = std::move(order);
}

Field AdmissibleSpace::extend(std::span<const double> x) const {
  if (x.size() != dim()) throw Error(Errc::shape_mismatch, "admissible vector length");
  Field f(grid_, components_);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (int c = 0; c < components_; ++c) f.at(nodes_[i], c) = x[i * components_ + c];
  return f;
}

void AdmissibleSpace::restrict(const Field& f, std::span<double> out) const {
  if (f.components() != components_ || out.size() != dim()) throw Error(Errc::shape_mismatch, "restriction sizes");
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (int c = 0; c < components_; ++c) out[i * components_ + c] = f.at(nodes_[i], c);
}

std::vector<double> AdmissibleSpace::restrict(const Field& f) const {
  std::vector<double> out(dim());
  restrict(f, out);
  return out;
}

LinearOperator gram_operator(const AdmissibleSpace& space, std::shared_ptr<const MultiplierSet> m,
                             std::vector<std::uint8_t> region, GramKind kind, const ElasticityTensor* C) {
  if (kind == GramKind::elastic && !C) throw Error(Errc::domain, "elastic Gram operator needs a tensor");
  std::optional<ElasticityTensor> tensor;
  if (C) tensor = *C;
  LinearOperator op;
  op.dim = space.dim();
  op.apply = [space, m, region = std::move(region), kind, tensor](std::span<const double> x, std::span<double> y) {
    const Field v = space.extend(x);
    Field g = apply_grad(v, *m);
    if (kind != GramKind::gradient) g = sym_part(g);
    if (kind == GramKind::elastic) g = apply_C(g, *tensor);
    Field d = apply_div(restrict_to(std::move(g), region), *m);
    d *= -1.0;
    space.restrict(d, y);
  };
  return op;
}

LinearOperator spectral_preconditioner(const AdmissibleSpace& space, std::shared_ptr<const MultiplierSet> m,
                                       double a_perp, double a_par) {
  if (!(a_perp > 0.0 && a_par > 0.0)) throw Error(Errc::domain, "preconditioner coefficients must be positive");
  const int n = m->n();
  const std::size_t spec = m->size();
  double floor = 0.0;
  for (double l : m->lap)
    if (-l > 0.0 && (floor == 0.0 || -l < floor)) floor = -l;
  // Per frequency: unit direction and the two scalar inverses.
  std::vector<double> dir(spec * n, 0.0), inv_perp(spec), inv_par(spec);
  for (std::size_t k = 0; k < spec; ++k) {
    const double g2 = -m->lap[k];
    if (g2 > 0.0) {
      for (int j = 0; j < n; ++j) dir[k * n + j] = m->grad_imag[k * n + j] / std::sqrt(g2);
      inv_perp[k] = 1.0 / (a_perp * g2);
      inv_par[k] = 1.0 / (a_par * g2);
    } else {
      inv_perp[k] = inv_par[k] = 1.0 / (std::max(a_perp, a_par) * floor);
    }
  }
  LinearOperator op;
  op.dim = space.dim();
  op.apply = [space, m, n, spec, dir = std::move(dir), inv_perp = std::move(inv_perp),
              inv_par = std::move(inv_par)](std::span<const double> x, std::span<double> y) {
    const Field v = space.extend(x);
    const Fft fft = m->fft();
    auto vh = transform(v, fft);
    std::vector<std::complex<double>> proj(n);
    for (std::size_t k = 0; k < spec; ++k) {
      std::complex<double> kr{};
      for (int j = 0; j < n; ++j) kr += dir[k * n + j] * vh[j * spec + k];
      for (int j = 0; j < n; ++j)
        vh[j * spec + k] = inv_perp[k] * vh[j * spec + k] + (inv_par[k] - inv_perp[k]) * dir[k * n + j] * kr;
    }
    Field out(v.grid(), n);
    std::vector<double> comp(v.nodes());
    for (int j = 0; j < n; ++j) {
      fft.inverse(std::span(vh).subspan(j * spec, spec), comp);
      out.set_component(j, comp);
    }
    space.restrict(out, y);
  };
  return op;
}

// ---------------------------------------------------------------------------

SolveResult solve(const DirichletProblem& pb) { return solve(pb, {}); }

SolveResult solve(const DirichletProblem& pb, std::vector<std::size_t> free_order) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = pb.grid().n;
  const AdmissibleSpace space(pb.disc, n, std::move(free_order));
  const LinearOperator A = gram_operator(space, pb.multipliers, pb.region, GramKind::elastic, &pb.tensor);
  const std::vector<double> b = space.restrict(pb.force);

  CgOptions opt;
  opt.tolerance = pb.options.tolerance;
  opt.max_iterations = pb.options.max_iterations > 0
                           ? pb.options.max_iterations
                           : static_cast<std::size_t>(std::ceil(10.0 * std::sqrt(static_cast<double>(space.dim()))));
  opt.keep_history = true;
  opt.throw_on_indefinite = false;
  std::optional<LinearOperator> P;
  if (pb.options.preconditioner)
    P = spectral_preconditioner(space, pb.multipliers, pb.tensor.shear(), pb.tensor.longitudinal());

  std::vector<double> x(space.dim());
  const CgResult cg = pcg(A, P ? &*P : nullptr, b, x, opt);
  const double hn = std::pow(pb.grid().h, n);

  SolveResult out;
  SolveReport& rep = out.report;
  rep.iterations = cg.iterations;
  rep.final_residual = cg.relative_residual;
  rep.spd_flag = cg.indefinite;
  rep.converged = cg.converged;
  rep.residual_history = cg.residual_history;
  rep.energy_history = cg.energy_history;
  for (double& e : rep.energy_history) e *= hn;
  // CG lowers the energy norm of the error at every step, so the last iterate
  // is the best one even when the residual has not yet dropped below 1.
  out.solution = space.extend(x);
  rep.energy = energy(out.solution, pb);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (cg.indefinite) throw SolveError(Errc::not_spd, "operator is not SPD on the admissible space", out);
  if (!cg.converged)
    throw SolveError(Errc::max_iterations,
                     "no convergence after " + std::to_string(cg.iterations) + " iterations (residual " +
                         std::to_string(cg.relative_residual) + ")",
                     out);
  return out;
}

Field manufacture(const Field& v_star, const DirichletProblem& pb) { return strong_apply(v_star, pb); }

ErrorNorms error_norms(const Field& computed, const Field& reference, const DomainMasks& masks) {
  if (!computed.compatible(reference)) throw Error(Errc::shape_mismatch, "error norms need matching fields");
  if (masks.omega_plus.size() != computed.nodes()) throw Error(Errc::shape_mismatch, "mask size");
  double d2 = 0.0, r2 = 0.0, dmax = 0.0, rmax = 0.0;
  for (std::size_t x = 0; x < computed.nodes(); ++x) {
    if (!masks.omega_plus[x]) continue;
    for (int c = 0; c < computed.components(); ++c) {
      const double d = computed.at(x, c) - reference.at(x, c);
      const double r = reference.at(x, c);
      d2 += d * d;
      r2 += r * r;
      dmax = std::max(dmax, std::abs(d));
      rmax = std::max(rmax, std::abs(r));
    }
  }
  const double hn = std::pow(computed.grid().h, computed.grid().n);
  ErrorNorms e;
  if (r2 == 0.0) {
    e.absolute = true;
    e.l2 = std::sqrt(hn * d2);
    e.max = dmax;
    return e;
  }
  e.l2 = std::sqrt(d2 / r2);
  e.max = dmax / rmax;
  return e;
}

}  // namespace nle
