#pragma once

// Matrix-free solves on the admissible space (fields vanishing outside
// Omega_{-delta}), manufactured solutions and error norms.

#include <optional>
#include <vector>

#include "nle/elasticity.hpp"
#include "nle/linalg.hpp"

namespace nle {

/// Free degrees of freedom: `components` values at each node of Omega_{-delta},
/// in a chosen node order (ascending by default).
class AdmissibleSpace {
 public:
  AdmissibleSpace(const Discretization& disc, int components, std::vector<std::size_t> order = {});

  std::size_t dim() const noexcept { return nodes_.size() * static_cast<std::size_t>(components_); }
  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
  int components() const noexcept { return components_; }
  const Grid& grid() const noexcept { return grid_; }

  Field extend(std::span<const double> x) const;
  void restrict(const Field& f, std::span<double> out) const;
  std::vector<double> restrict(const Field& f) const;

 private:
  Grid grid_;
  int components_;
  std::vector<std::size_t> nodes_;
};

enum class GramKind {
  gradient,      // D v : D v
  sym_gradient,  // D_sym v : D_sym v
  elastic,       // C D_sym v : D_sym v
};

/// x -> R (-div chi K D) R^T x, the Gram operator of a form over `region`
/// (without the h^n factor). Symmetric positive semidefinite by construction.
LinearOperator gram_operator(const AdmissibleSpace& space, std::shared_ptr<const MultiplierSet> m,
                             std::vector<std::uint8_t> region, GramKind kind, const ElasticityTensor* C = nullptr);

/// Frequency-diagonal approximate inverse with symbol
/// (I - k k^T)/(a_perp g^2) + k k^T/(a_par g^2), k = M/|M|, applied to the
/// zero-extended vector and restricted back.
LinearOperator spectral_preconditioner(const AdmissibleSpace& space, std::shared_ptr<const MultiplierSet> m,
                                       double a_perp, double a_par);

struct SolveReport {
  std::size_t iterations = 0;
  double final_residual = 0.0;
  double energy = 0.0;
  double wall_time = 0.0;
  bool spd_flag = false;  // true if negative curvature was met
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> energy_history;  // h^n * (1/2 x.Ax - b.x) along the iteration
};

struct SolveResult {
  Field solution;
  SolveReport report;
};

/// Solver failure carrying the best iterate.
class SolveError : public Error {
 public:
  SolveError(Errc code, const std::string& what, SolveResult partial)
      : Error(code, what), partial_(std::move(partial)) {}
  const SolveResult& partial() const noexcept { return partial_; }

 private:
  SolveResult partial_;
};

SolveResult solve(const DirichletProblem& pb);
/// Same with an explicit ordering of the free nodes.
SolveResult solve(const DirichletProblem& pb, std::vector<std::size_t> free_order);

/// f = -div(C D_sym v*).
Field manufacture(const Field& v_star, const DirichletProblem& pb);

struct ErrorNorms {
  double l2 = 0.0;
  double max = 0.0;
  bool absolute = false;  // reference vanished; norms are absolute
};

/// Relative discrete L2 and max errors over Omega_delta.
ErrorNorms error_norms(const Field& computed, const Field& reference, const DomainMasks& masks);

}  // namespace nle
