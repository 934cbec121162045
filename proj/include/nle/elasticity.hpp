#pragma once

// Linear elasticity tensors, bilinear forms, energies and strong-form operators
// built on the nonlocal or fractional gradient.

#include <memory>
#include <vector>

#include "nle/fields.hpp"
#include "nle/nlops.hpp"

namespace nle {

struct IsotropicModuli {
  double mu = 1.0;
  double lambda = 1.0;

  /// Requires mu > 0 and 2 mu + n lambda > 0.
  void validate(int n) const;
};

/// Fourth-order tensor c_ijkl stored at ((i n + j) n + k) n + l.
class ElasticityTensor {
 public:
  static ElasticityTensor isotropic(int n, IsotropicModuli m);
  /// Checks minor and major symmetries exactly and positive definiteness on
  /// symmetric matrices; throws Errc::domain otherwise.
  static ElasticityTensor general(int n, std::vector<double> c);
  /// mu (d_ik d_jl + d_il d_jk) + lambda d_ij d_kl as a general tensor.
  static ElasticityTensor general_from(int n, IsotropicModuli m);

  int n() const noexcept { return n_; }
  bool is_isotropic() const noexcept { return isotropic_; }
  const IsotropicModuli& moduli() const noexcept { return moduli_; }
  const std::vector<double>& coefficients() const noexcept { return c_; }
  double c(int i, int j, int k, int l) const { return c_[((i * n_ + j) * n_ + k) * n_ + l]; }

  /// Smallest eigenvalue of e -> C e on symmetric matrices (Frobenius inner product).
  double min_sym_eigenvalue() const { return min_eig_; }
  /// Effective shear and longitudinal stiffness (c_0101 and c_0000).
  double shear() const;
  double longitudinal() const;

  /// out = C e at one point; uses the isotropic formula when available.
  void apply(const double* e, double* out) const;
  void apply_general(const double* e, double* out) const;

 private:
  int n_ = 2;
  bool isotropic_ = false;
  IsotropicModuli moduli_;
  std::vector<double> c_;
  double min_eig_ = 0.0;
};

/// Pointwise C e. Rejects inputs whose asymmetry exceeds 1e-12 (relative to max |e|).
Field apply_C(const Field& e, const ElasticityTensor& C);

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 0;  // 0: 10 * sqrt(dof)
  bool preconditioner = false;
};

struct DirichletProblem {
  Discretization disc;
  FractionalParams params;
  Variant variant = Variant::nonlocal;
  ElasticityTensor tensor = ElasticityTensor::isotropic(2, {});
  Field force;  // vector field; only its values on Omega_{-delta} enter the weak form
  SolverOptions options;
  std::shared_ptr<const MultiplierSet> multipliers;
  std::vector<std::uint8_t> region;  // see form_region

  /// Builds multipliers if none are supplied. A default-constructed force is
  /// replaced by zero.
  static DirichletProblem make(Discretization disc, FractionalParams params, Variant variant, ElasticityTensor C,
                               Field force = {}, SolverOptions options = {},
                               std::shared_ptr<const MultiplierSet> multipliers = nullptr);

  /// Integration region of the forms: Omega (nonlocal) or the whole box (fractional).
  const std::vector<std::uint8_t>& form_region() const noexcept { return region; }
  const Grid& grid() const noexcept { return disc.grid; }
};

/// Pointwise D_sym v.
Field sym_gradient(const Field& v, const MultiplierSet& m);

double bilinear_a(const Field& v, const Field& w, const DirichletProblem& pb);
/// Expansion int 2 mu D_sym v : D_sym w + lambda div v div w (isotropic tensors only).
double bilinear_a_isotropic(const Field& v, const Field& w, const DirichletProblem& pb);
double energy(const Field& v, const DirichletProblem& pb);

enum class StrongPath { automatic, general, isotropic };

/// -div(C D_sym v); the isotropic path is -mu Lap v - (mu + lambda) D(div v).
Field strong_apply(const Field& v, const DirichletProblem& pb, StrongPath path = StrongPath::automatic);

}  // namespace nle
