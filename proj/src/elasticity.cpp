#include "nle/elasticity.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nle/error.hpp"

namespace nle {

void IsotropicModuli::validate(int n) const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::domain, "shear modulus mu must be positive");
  if (!(2.0 * mu + n * lambda > 0.0) || !std::isfinite(lambda))
    throw Error(Errc::domain, "2 mu + n lambda must be positive");
}

namespace {

std::vector<double> isotropic_coefficients(int n, IsotropicModuli m) {
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  std::vector<double> c(static_cast<std::size_t>(n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          c[((i * n + j) * n + k) * n + l] = m.mu * (d(i, k) * d(j, l) + d(i, l) * d(j, k)) + m.lambda * d(i, j) * d(k, l);
  return c;
}

// Orthonormal basis of symmetric n x n matrices, row-major entries.
std::vector<std::vector<double>> sym_basis(int n) {
  std::vector<std::vector<double>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<double> e(static_cast<std::size_t>(n * n), 0.0);
      if (i == j) {
        e[i * n + i] = 1.0;
      } else {
        e[i * n + j] = e[j * n + i] = 1.0 / std::sqrt(2.0);
      }
      basis.push_back(std::move(e));
    }
  return basis;
}

}  // namespace

ElasticityTensor ElasticityTensor::isotropic(int n, IsotropicModuli m) {
  m.validate(n);
  ElasticityTensor t = general(n, isotropic_coefficients(n, m));
  t.isotropic_ = true;
  t.moduli_ = m;
  return t;
}

ElasticityTensor ElasticityTensor::general_from(int n, IsotropicModuli m) {
  m.validate(n);
  return general(n, isotropic_coefficients(n, m));
}

ElasticityTensor ElasticityTensor::general(int n, std::vector<double> c) {
  if (n != 1 && n != 2) throw Error(Errc::domain, "dimension must be 1 or 2");
  if (c.size() != static_cast<std::size_t>(n * n * n * n)) throw Error(Errc::shape_mismatch, "need n^4 coefficients");
  ElasticityTensor t;
  t.n_ = n;
  t.c_ = std::move(c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = t.c(i, j, k, l);
          if (!std::isfinite(v)) throw Error(Errc::domain, "non-finite elasticity coefficient");
          if (v != t.c(j, i, k, l) || v != t.c(i, j, l, k) || v != t.c(k, l, i, j))
            throw Error(Errc::domain, "elasticity tensor lacks minor or major symmetry");
        }
  const auto basis = sym_basis(n);
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd Q(m, m);
  std::vector<double> ce(static_cast<std::size_t>(n * n));
  for (Eigen::Index b = 0; b < m; ++b) {
    t.apply_general(basis[b].data(), ce.data());
    for (Eigen::Index a = 0; a < m; ++a) {
      double acc = 0.0;
      for (int q = 0; q < n * n; ++q) acc += basis[a][q] * ce[q];
      Q(a, b) = acc;
    }
  }
  t.min_eig_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (!(t.min_eig_ > 0.0)) throw Error(Errc::domain, "elasticity tensor is not positive definite on symmetric matrices");
  return t;
}

double ElasticityTensor::shear() const { return n_ == 1 ? c(0, 0, 0, 0) / 2.0 : c(0, 1, 0, 1); }
double ElasticityTensor::longitudinal() const { return c(0, 0, 0, 0); }

void ElasticityTensor::apply_general(const double* e, double* out) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) acc += c(i, j, k, l) * e[k * n_ + l];
      out[i * n_ + j] = acc;
    }
}

void ElasticityTensor::apply(const double* e, double* out) const {
  if (!isotropic_) {
    apply_general(e, out);
    return;
  }
  double tr = 0.0;
  for (int i = 0; i < n_; ++i) tr += e[i * n_ + i];
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i * n_ + j] = 2.0 * moduli_.mu * e[i * n_ + j] + (i == j ? moduli_.lambda * tr : 0.0);
}

Field apply_C(const Field& e, const ElasticityTensor& C) {
  const int n = C.n();
  if (e.components() != n * n || e.grid().n != n) throw Error(Errc::shape_mismatch, "apply_C needs a matrix field");
  const double scale = std::max(1.0, e.max_abs());
  Field out(e.grid(), n * n);
  for (std::size_t x = 0; x < e.nodes(); ++x) {
    const double* ex = &e.values()[x * n * n];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(ex[i * n + j] - ex[j * n + i]) > 1e-12 * scale)
          throw Error(Errc::domain, "apply_C received a non-symmetric strain");
    C.apply(ex, &out.values()[x * n * n]);
  }
  return out;
}

DirichletProblem DirichletProblem::make(Discretization disc, FractionalParams params, Variant variant,
                                        ElasticityTensor C, Field force, SolverOptions options,
                                        std::shared_ptr<const MultiplierSet> multipliers) {
  if (C.n() != disc.grid.n) throw Error(Errc::shape_mismatch, "tensor and grid dimensions differ");
  DirichletProblem pb;
  pb.params = params;
  pb.variant = variant;
  pb.tensor = std::move(C);
  pb.options = options;
  if (force.components() == 0) force = Field(disc.grid, disc.grid.n);
  if (!(force.grid() == disc.grid) || force.components() != disc.grid.n)
    throw Error(Errc::shape_mismatch, "force must be a vector field on the problem grid");
  for (double v : force.values())
    if (!std::isfinite(v)) throw Error(Errc::domain, "force has non-finite values");
  pb.force = std::move(force);
  if (!multipliers) multipliers = build_multipliers(disc.grid, params, variant);
  if (!(multipliers->grid == disc.grid) || multipliers->variant != variant)
    throw Error(Errc::shape_mismatch, "multipliers do not match the problem");
  pb.multipliers = std::move(multipliers);
  pb.region = variant == Variant::nonlocal ? disc.masks.omega : std::vector<std::uint8_t>(disc.grid.size(), 1);
  pb.disc = std::move(disc);
  if (!(options.tolerance > 0.0 && options.tolerance < 1.0)) throw Error(Errc::domain, "tolerance must lie in (0, 1)");
  return pb;
}

Field sym_gradient(const Field& v, const MultiplierSet& m) { return sym_part(apply_grad(v, m)); }

namespace {

void require_admissible(const Field& v, const DirichletProblem& pb) {
  if (!(v.grid() == pb.grid()) || v.components() != pb.grid().n)
    throw Error(Errc::shape_mismatch, "expected a vector field on the problem grid");
  if (!is_admissible(v, pb.disc.masks)) throw Error(Errc::support_violation, "field is not admissible");
}

}  // namespace

double bilinear_a(const Field& v, const Field& w, const DirichletProblem& pb) {
  require_admissible(v, pb);
  require_admissible(w, pb);
  const Field ev = sym_gradient(v, *pb.multipliers);
  const Field ew = sym_gradient(w, *pb.multipliers);
  return inner_product(apply_C(ev, pb.tensor), ew, pb.form_region());
}

double bilinear_a_isotropic(const Field& v, const Field& w, const DirichletProblem& pb) {
  if (!pb.tensor.is_isotropic()) throw Error(Errc::domain, "isotropic expansion needs an isotropic tensor");
  require_admissible(v, pb);
  require_admissible(w, pb);
  const auto& m = *pb.multipliers;
  const auto& region = pb.form_region();
  const double shear = inner_product(sym_gradient(v, m), sym_gradient(w, m), region);
  const double bulk = inner_product(apply_div(v, m), apply_div(w, m), region);
  return 2.0 * pb.tensor.moduli().mu * shear + pb.tensor.moduli().lambda * bulk;
}

double energy(const Field& v, const DirichletProblem& pb) {
  return 0.5 * bilinear_a(v, v, pb) - inner_product(pb.force, v, pb.disc.masks.omega);
}

Field strong_apply(const Field& v, const DirichletProblem& pb, StrongPath path) {
  require_admissible(v, pb);
  const auto& m = *pb.multipliers;
  if (path == StrongPath::automatic) path = pb.tensor.is_isotropic() ? StrongPath::isotropic : StrongPath::general;
  if (path == StrongPath::isotropic) {
    if (!pb.tensor.is_isotropic()) throw Error(Errc::domain, "isotropic path needs an isotropic tensor");
    const double mu = pb.tensor.moduli().mu;
    const double lambda = pb.tensor.moduli().lambda;
    Field out = apply_laplacian(v, m);
    out *= -mu;
    Field gd = apply_grad(apply_div(v, m), m);
    gd *= -(mu + lambda);
    return out += gd;
  }
  ElasticityTensor general = ElasticityTensor::general(pb.tensor.n(), pb.tensor.coefficients());
  Field out = apply_div(apply_C(sym_gradient(v, m), general), m);
  out *= -1.0;
  return out;
}

}  // namespace nle
