#include "nle/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nle/error.hpp"

namespace nle {

namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process; FFTW planning is not thread-safe.
PlanPair plans_for(const Grid& g) {
  static std::map<std::array<std::size_t, 3>, PlanPair> cache;
  const std::array<std::size_t, 3> key{static_cast<std::size_t>(g.n), g.shape[0], g.n == 2 ? g.shape[1] : 1};
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int dims[2] = {static_cast<int>(g.shape[0]), static_cast<int>(g.n == 2 ? g.shape[1] : 1)};
  const std::size_t real = g.size();
  const std::size_t spec = spectrum_size(g);
  double* rbuf = fftw_alloc_real(real);
  fftw_complex* cbuf = fftw_alloc_complex(spec);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pp;
  pp.r2c = fftw_plan_dft_r2c(g.n, dims, rbuf, cbuf, flags);
  pp.c2r = fftw_plan_dft_c2r(g.n, dims, cbuf, rbuf, flags);
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!pp.r2c || !pp.c2r) throw Error(Errc::domain, "FFTW planning failed");
  cache.emplace(key, pp);
  return pp;
}

}  // namespace

std::size_t spectrum_size(const Grid& g) {
  return g.n == 1 ? g.shape[0] / 2 + 1 : g.shape[0] * (g.shape[1] / 2 + 1);
}

Fft::Fft(const Grid& grid) : real_size_(grid.size()), spectrum_size_(nle::spectrum_size(grid)) {
  const PlanPair pp = plans_for(grid);
  r2c_ = pp.r2c;
  c2r_ = pp.c2r;
}

void Fft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != real_size_ || out.size() != spectrum_size_)
    throw Error(Errc::shape_mismatch, "forward transform buffer sizes");
  // Out-of-place r2c leaves the input intact.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != spectrum_size_ || out.size() != real_size_)
    throw Error(Errc::shape_mismatch, "inverse transform buffer sizes");
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (double& v : out) v *= scale;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NLE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return std::min(hw, static_cast<unsigned>(v));
    } catch (const std::exception&) {
    }
  }
  return hw;
}

}  // namespace nle
