#pragma once

// Nonlocal and fractional gradient, divergence and Laplacian as Fourier
// multipliers on the grid's periodic box, plus a pointwise quadrature oracle.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nle/fft.hpp"
#include "nle/fields.hpp"
#include "nle/kernelcore.hpp"

namespace nle {

/// Operator symbols on the half spectrum of a grid. All gradient symbols are
/// purely imaginary, M_j = i * grad_imag[k * n + j]; the component along an
/// axis whose index sits at the Nyquist frequency is zeroed so that the
/// lattice symbol stays Hermitian.
struct MultiplierSet {
  Variant variant = Variant::nonlocal;
  Grid grid;
  FractionalParams params;

  std::vector<double> xi;            // n signed frequencies per spectrum node
  std::vector<std::uint8_t> nyquist;  // bit j set when axis j is at N_j / 2
  std::vector<double> weight;        // Hermitian multiplicity, 1 or 2
  std::vector<double> grad_imag;     // n per node
  std::vector<double> lap;           // -|M|^2
  std::vector<double> qhat;          // nonlocal: qhat(|xi|); fractional: |2 pi xi|^{s-1}, 0 at xi = 0
  double min_g = 0.0;                // smallest g over nonzero lattice frequencies (nonlocal)
  std::size_t distinct_radii = 0;

  std::size_t size() const noexcept { return weight.size(); }
  int n() const noexcept { return grid.n; }
  std::complex<double> grad(std::size_t k, int j) const { return {0.0, grad_imag[k * grid.n + j]}; }
  double radius(std::size_t k) const;
  /// Local gradient symbol 2 pi i xi_j with the same Nyquist treatment.
  std::complex<double> local_grad(std::size_t k, int j) const;
  Fft fft() const { return Fft(grid); }
};

std::shared_ptr<const MultiplierSet> build_multipliers(const Grid& grid, const FractionalParams& p, Variant v);

/// Gradient symbol on the full lattice, n complex entries per node in the
/// grid's node order with index k interpreted as a frequency k or k - N.
/// Computed independently of the half-spectrum path; used for symmetry checks.
std::vector<std::complex<double>> full_lattice_symbol(const Grid& grid, const FractionalParams& p, Variant v);

/// Scalar -> vector or vector -> matrix, entry (i, j) = F^{-1}[M_j u_i^].
Field apply_grad(const Field& u, const MultiplierSet& m);
/// Vector -> scalar or matrix -> vector (row-wise).
Field apply_div(const Field& phi, const MultiplierSet& m);
Field apply_laplacian(const Field& u, const MultiplierSet& m);

/// Pointwise (G + G^T)/2 of a matrix field.
Field sym_part(const Field& G);
Field transpose(const Field& G);
/// Pointwise trace of a matrix field.
Field trace(const Field& G);
/// Scalar field times the identity.
Field times_identity(const Field& f);

/// Spectrum of every component of a field, component-major.
std::vector<std::complex<double>> transform(const Field& f, const Fft& fft);

/// Largest |f| outside `mask` relative to the overall largest |f|.
double leakage(const Field& f, std::span<const std::uint8_t> mask);

/// Smooth field evaluable at arbitrary points.
struct SmoothField {
  int components = 1;
  std::function<void(std::span<const double> x, std::span<double> out)> eval;
  std::array<double, 2> center{0.0, 0.0};  // support is inside B(center, radius)
  double radius = 0.0;
};

struct OracleResult {
  std::vector<double> value;  // components * n, entry (i, j) at i * n + j
  double error_estimate = 0.0;
};

/// Direct polar quadrature of the defining singular integral at x.
/// Nonlocal: over B(0, delta) with w_delta; fractional: over R^n with w = 1,
/// which the symmetric difference reduces to |z| <= |x - center| + radius.
OracleResult oracle_grad_point(const SmoothField& u, std::span<const double> x, const FractionalParams& p,
                               Variant v, std::size_t angular = 128);

}  // namespace nle
