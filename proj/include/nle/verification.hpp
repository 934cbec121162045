#pragma once

// Numerical checks of the operator identities, Korn and Poincare constants,
// Eringen-form equivalences and the Mercer condition.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nle/elasticity.hpp"
#include "nle/report.hpp"
#include "nle/solver.hpp"

namespace nle {

/// Seeded generator with platform-independent doubles.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Integer in [lo, hi].
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

/// Sum of 3-7 admissible bumps with random centers, radii and amplitudes,
/// independently per component.
Field random_bump_field(const Discretization& disc, int components, Rng& rng);

enum class EigenMethod { automatic, dense, lanczos };

struct ConstantEstimate {
  double value = 0.0;       // c^2 (Korn) or C (Poincare)
  double lambda_min = 0.0;  // smallest pencil eigenvalue
  double pencil_residual = 0.0;
  std::string method;
  std::size_t dim = 0;
  std::size_t steps = 0;
  Grid grid;
  FractionalParams params;
  Variant variant = Variant::nonlocal;
  Field mode;  // eigenvector, zero-extended
};

/// Norm region of the constants: Omega (nonlocal) or the whole box (fractional).
std::vector<std::uint8_t> norm_region(const Discretization& disc, Variant v);

/// c^2 = min ||D_sym v||^2 / ||D v||^2 over admissible v.
ConstantEstimate korn_constant(const Discretization& disc, const FractionalParams& p, Variant v,
                               EigenMethod method = EigenMethod::automatic,
                               std::shared_ptr<const MultiplierSet> m = nullptr);
/// C = 1 / sqrt(min ||D v||^2 / ||v||^2) over admissible v.
ConstantEstimate poincare_constant(const Discretization& disc, const FractionalParams& p, Variant v,
                                   EigenMethod method = EigenMethod::automatic,
                                   std::shared_ptr<const MultiplierSet> m = nullptr);

double korn_quotient(const Field& v, const MultiplierSet& m, std::span<const std::uint8_t> region);
double poincare_quotient(const Field& v, const MultiplierSet& m, std::span<const std::uint8_t> region);

enum class EringenKernel { qq, riesz };
struct KernelChoice {
  EringenKernel kind = EringenKernel::qq;
  double alpha = 1.0;  // Riesz order
};
enum class EringenPath { spectral, realspace };

/// Kernel symbol A^(xi) at spectral node k (0 at xi = 0 for Riesz).
double kernel_symbol(const KernelChoice& kernel, const MultiplierSet& m, std::size_t k);

/// int int A(x - x') C D_sym v(x) : D_sym w(x') dx dx' with the local symmetric
/// gradient. QQ needs nonlocal multipliers. The real-space path refuses grids
/// with more than 32^n nodes in Omega.
double eringen_form(const Field& v, const Field& w, const KernelChoice& kernel, EringenPath path,
                    const MultiplierSet& m, const ElasticityTensor& C, const Discretization& disc);

struct EringenOptions {
  std::size_t pairs = 10;
  std::uint64_t seed = 1;
  std::size_t mercer_trials = 100;
  IsotropicModuli moduli;
  /// Coarse real-space cross-check; skipped when realspace_h <= 0.
  Rect realspace_omega;
  double realspace_h = 0.0;
  double realspace_delta = 0.0;
  std::size_t realspace_pairs = 3;
};

/// QQ kernel against the nonlocal form and the Riesz kernel of order
/// 2(1 - s) against the fractional form, plus Mercer certificates.
Report eringen_suite(const Rect& omega, double h, const FractionalParams& p, const EringenOptions& opt = {});

struct MercerReport {
  double min_symbol = 0.0;
  double max_symbol = 0.0;
  std::size_t negative = 0;
  std::vector<double> forms;
  std::uint64_t seed = 0;
  bool pass = false;
};

MercerReport mercer_check(const KernelChoice& kernel, const MultiplierSet& m, const Discretization& disc,
                          std::size_t trials, std::uint64_t seed);

struct SuiteOptions {
  std::size_t fields = 10;
  std::uint64_t seed = 1;
  double a0_scale = 1.0;  // fault injection on the calibrated plateau height
  std::size_t affine_trials = 3;
  double affine_padding = 4.0;
};

/// Runs every identity on seeded random fields; one row per assertion.
Report identity_suite(const Rect& omega, double h, const FractionalParams& p, Variant v,
                      const SuiteOptions& opt = {});

/// Relative defect max|a - b| / max(max|a|, max|b|) over all nodes.
double relative_defect(const Field& a, const Field& b);

/// Largest |D u - F| / |F| over Omega for u = (F x + a) times the plateau.
double affine_defect(const Discretization& disc, const MultiplierSet& m, std::span<const double> F,
                     std::span<const double> a);

}  // namespace nle
