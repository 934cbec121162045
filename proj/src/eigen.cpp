#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "nle/linalg.hpp"

namespace nle {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double pencil_residual(const LinearOperator& A, const LinearOperator& B, double lambda, std::span<const double> x) {
  std::vector<double> ax(x.size()), bx(x.size());
  A.apply(x, ax);
  B.apply(x, bx);
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] -= lambda * bx[i];
  return norm2(ax) / (std::abs(lambda) * norm2(bx));
}

}  // namespace

EigenResult lanczos_smallest(const LinearOperator& A, const LinearOperator& B, const LinearOperator* precond,
                             const EigenOptions& opt, Errc on_indefinite) {
  const std::size_t dim = A.dim;
  if (B.dim != dim || dim == 0) throw Error(Errc::shape_mismatch, "pencil operators differ in dimension");
  std::mt19937_64 rng(opt.seed);
  std::vector<std::vector<double>> Q, BQ;
  std::vector<double> alpha, beta;

  std::vector<double> q(dim), bq(dim);
  if (opt.start.empty()) {
    for (double& v : q) v = uniform01(rng) - 0.5;
  } else {
    if (opt.start.size() != dim) throw Error(Errc::shape_mismatch, "start vector has the wrong dimension");
    q = opt.start;
  }
  B.apply(q, bq);
  double nb = dot(q, bq);
  if (!(nb > 0.0)) throw Error(on_indefinite, "B is not positive definite on the start vector");
  nb = std::sqrt(nb);
  for (std::size_t i = 0; i < dim; ++i) {
    q[i] /= nb;
    bq[i] /= nb;
  }
  Q.push_back(q);
  BQ.push_back(bq);

  CgOptions inner;
  inner.tolerance = opt.inner_tolerance;
  inner.max_iterations = opt.inner_max_iterations;
  inner.on_indefinite = on_indefinite;

  EigenResult res;
  Eigen::VectorXd ritz;
  double theta = 0.0;
  const std::size_t max_steps = std::min(opt.max_steps, dim);
  std::vector<double> w(dim), bw(dim);
  for (std::size_t j = 0; j < max_steps; ++j) {
    std::fill(w.begin(), w.end(), 0.0);
    const CgResult cg = pcg(A, precond, BQ[j], w, inner);
    res.inner_iterations += cg.iterations;
    const double a = dot(w, BQ[j]);
    alpha.push_back(a);
    // Full reorthogonalization in the B inner product, applied twice.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i <= j; ++i) {
        const double c = dot(w, BQ[i]);
        for (std::size_t k = 0; k < dim; ++k) w[k] -= c * Q[i][k];
      }
    B.apply(w, bw);
    const double b2 = dot(w, bw);
    const double b = b2 > 0.0 ? std::sqrt(b2) : 0.0;

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    theta = es.eigenvalues()(m - 1);
    ritz = es.eigenvectors().col(m - 1);
    res.steps = j + 1;
    const double estimate = std::abs(b * ritz(m - 1)) / std::abs(theta);
    const bool settled = estimate <= opt.tolerance && j + 1 >= opt.min_steps;
    if (settled || b <= 1e-14 * std::abs(theta) || j + 1 == max_steps) break;
    beta.push_back(b);
    for (std::size_t k = 0; k < dim; ++k) {
      w[k] /= b;
      bw[k] /= b;
    }
    Q.push_back(w);
    BQ.push_back(bw);
  }
  res.lambda = 1.0 / theta;
  res.vector.assign(dim, 0.0);
  for (Eigen::Index i = 0; i < ritz.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) res.vector[k] += ritz(i) * Q[i][k];
  res.residual = pencil_residual(A, B, res.lambda, res.vector);
  return res;
}

EigenResult dense_smallest(const LinearOperator& A, const LinearOperator& B) {
  const std::size_t dim = A.dim;
  if (B.dim != dim || dim == 0) throw Error(Errc::shape_mismatch, "pencil operators differ in dimension");
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd Am(d, d), Bm(d, d);
  std::vector<double> e(dim, 0.0), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    A.apply(e, col);
    for (std::size_t i = 0; i < dim; ++i) Am(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    B.apply(e, col);
    for (std::size_t i = 0; i < dim; ++i) Bm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    e[j] = 0.0;
  }
  // Symmetrize away rounding before the Cholesky-based reduction.
  Am = 0.5 * (Am + Am.transpose()).eval();
  Bm = 0.5 * (Bm + Bm.transpose()).eval();
  if (Bm.llt().info() != Eigen::Success)
    throw Error(Errc::operator_not_injective, "B is singular or indefinite on the admissible space");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Am, Bm);
  if (es.info() != Eigen::Success) throw Error(Errc::operator_not_injective, "dense pencil solve failed");
  EigenResult res;
  res.lambda = es.eigenvalues()(0);
  res.vector.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) res.vector[i] = es.eigenvectors()(static_cast<Eigen::Index>(i), 0);
  res.steps = dim;
  res.residual = pencil_residual(A, B, res.lambda, res.vector);
  return res;
}

}  // namespace nle
