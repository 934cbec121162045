#pragma once

// Real-to-complex transforms over a grid's periodic box (FFTW backend).

#include <complex>
#include <cstddef>
#include <span>

#include "nle/fields.hpp"

namespace nle {

/// Thin handle on cached FFTW plans for one grid shape. The half spectrum
/// keeps the last axis truncated to N_last/2 + 1 entries. Forward is
/// unnormalized; inverse divides by the number of nodes. Safe to use from
/// several threads at once (plans are only executed, never modified).
class Fft {
 public:
  explicit Fft(const Grid& grid);

  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t spectrum_size() const noexcept { return spectrum_size_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// `in` is left untouched (a scratch copy is transformed).
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
  std::size_t real_size_ = 0;
  std::size_t spectrum_size_ = 0;
};

/// Half-spectrum size for a grid.
std::size_t spectrum_size(const Grid& grid);

/// Worker cap from NLE_THREADS (0 or unset: hardware concurrency).
unsigned worker_count();

}  // namespace nle
