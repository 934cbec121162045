#pragma once

// Matrix-free symmetric solvers: preconditioned CG and the smallest
// eigenpair of a symmetric-definite pencil.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nle/error.hpp"

namespace nle {

struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

struct CgOptions {
  double tolerance = 1e-10;  // on ||r|| / ||b||
  std::size_t max_iterations = 1000;
  Errc on_indefinite = Errc::not_spd;
  bool keep_history = false;
  bool throw_on_indefinite = true;
};

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool indefinite = false;
  std::vector<double> residual_history;  // ||r_k|| / ||b||, k >= 0
  std::vector<double> energy_history;    // -1/2 b.x_k, k >= 0
  std::vector<double> best;              // iterate with the smallest residual
  double best_residual = 0.0;
};

/// Solves A x = b from x = 0. On p.Ap <= 0 throws Error(on_indefinite), or
/// stops with `indefinite` set when throw_on_indefinite is false.
/// Does not throw on reaching max_iterations; check `converged`.
CgResult pcg(const LinearOperator& A, const LinearOperator* M, std::span<const double> b, std::span<double> x,
             const CgOptions& opt);

struct EigenOptions {
  double tolerance = 1e-12;        // Ritz estimate, relative to the Ritz value
  std::size_t max_steps = 300;
  std::size_t min_steps = 20;      // unless the Krylov space is exhausted
  double inner_tolerance = 1e-13;  // inner solves with A
  std::size_t inner_max_iterations = 5000;
  std::uint64_t seed = 7;
  std::vector<double> start;  // start vector; random from `seed` when empty
};

struct EigenResult {
  double lambda = 0.0;
  std::vector<double> vector;  // B-normalized
  double residual = 0.0;       // ||A x - lambda B x|| / (lambda ||B x||)
  std::size_t steps = 0;
  std::size_t inner_iterations = 0;
};

/// Smallest eigenvalue of A x = lambda B x (A, B symmetric positive definite)
/// by Lanczos on A^{-1} B in the B inner product with full reorthogonalization.
/// `precond` approximates A^{-1} for the inner CG. If A turns out indefinite,
/// throws Error(on_indefinite) from the inner solve.
EigenResult lanczos_smallest(const LinearOperator& A, const LinearOperator& B, const LinearOperator* precond,
                             const EigenOptions& opt, Errc on_indefinite = Errc::operator_not_injective);

/// Dense reference: assembles A and B column by column and solves the pencil.
/// Throws Errc::operator_not_injective if B is not positive definite.
EigenResult dense_smallest(const LinearOperator& A, const LinearOperator& B);

}  // namespace nle
