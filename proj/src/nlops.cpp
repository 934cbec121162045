#include "nle/nlops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

#include "nle/error.hpp"

namespace nle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct AxisFreq {
  double xi;
  bool nyquist;
};

AxisFreq axis_frequency(std::size_t k, std::size_t N, double L) {
  const bool even = N % 2 == 0;
  const long signed_k = k <= (N - 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(N);
  return {static_cast<double>(signed_k) / L, even && k == N / 2};
}

// g at each distinct radius, evaluated in parallel over disjoint slices.
std::vector<double> radial_g(const std::vector<double>& radii, const FractionalParams& p) {
  std::vector<double> out(radii.size(), 0.0);
  if (radii.empty()) return out;
  const double rho_max = *std::max_element(radii.begin(), radii.end());
  const SymbolEvaluator eval(p, rho_max);
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(radii.size()));
  auto slice = [&](unsigned w) {
    for (std::size_t i = w; i < radii.size(); i += workers) out[i] = eval.g(radii[i]);
  };
  if (workers <= 1) {
    slice(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(slice, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

// Frequency vectors of the nodes listed in `shape_k` (multi-indices into a
// lattice of the grid's shape) and their symbols.
struct SymbolTable {
  std::vector<double> xi;
  std::vector<std::uint8_t> nyq;
  std::vector<double> grad_imag;
  std::vector<double> qhat;
  double min_g = 0.0;
  std::size_t distinct = 0;
};

SymbolTable symbols(const Grid& grid, const FractionalParams& p, Variant v,
                    const std::vector<std::array<std::size_t, 2>>& indices) {
  const int n = grid.n;
  SymbolTable t;
  const std::size_t count = indices.size();
  t.xi.resize(count * n);
  t.nyq.resize(count);
  t.grad_imag.resize(count * n);
  t.qhat.resize(count);
  std::vector<double> rho(count);
  for (std::size_t k = 0; k < count; ++k) {
    double r2 = 0.0;
    std::uint8_t bits = 0;
    for (int a = 0; a < n; ++a) {
      const AxisFreq f = axis_frequency(indices[k][a], grid.shape[a], grid.box_length(a));
      t.xi[k * n + a] = f.xi;
      if (f.nyquist) bits |= static_cast<std::uint8_t>(1u << a);
      r2 += f.xi * f.xi;
    }
    t.nyq[k] = bits;
    rho[k] = std::sqrt(r2);
  }

  std::vector<double> gvals(count, 0.0);
  if (v == Variant::nonlocal) {
    std::map<double, std::size_t> unique;
    for (double r : rho)
      if (r > 0.0) unique.emplace(r, 0);
    std::vector<double> radii;
    radii.reserve(unique.size());
    for (auto& [r, idx] : unique) {
      idx = radii.size();
      radii.push_back(r);
    }
    const std::vector<double> g = radial_g(radii, p);
    t.distinct = radii.size();
    t.min_g = g.empty() ? 0.0 : *std::min_element(g.begin(), g.end());
    for (std::size_t k = 0; k < count; ++k) {
      if (rho[k] == 0.0) {
        t.qhat[k] = 1.0;
        continue;
      }
      gvals[k] = g[unique.at(rho[k])];
      t.qhat[k] = gvals[k] / (kTwoPi * rho[k]);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      if (rho[k] == 0.0) continue;
      const double factor = std::pow(kTwoPi * rho[k], p.s - 1.0);
      gvals[k] = kTwoPi * rho[k] * factor;
      t.qhat[k] = factor;
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    for (int j = 0; j < n; ++j) {
      if (rho[k] == 0.0 || (t.nyq[k] >> j) & 1u) continue;
      t.grad_imag[k * n + j] = t.xi[k * n + j] / rho[k] * gvals[k];
    }
  }
  return t;
}

void check_components(const Field& f, const MultiplierSet& m) {
  if (!(f.grid() == m.grid)) throw Error(Errc::shape_mismatch, "field and multipliers live on different grids");
}

}  // namespace

double MultiplierSet::radius(std::size_t k) const {
  double r2 = 0.0;
  for (int a = 0; a < grid.n; ++a) r2 += xi[k * grid.n + a] * xi[k * grid.n + a];
  return std::sqrt(r2);
}

std::complex<double> MultiplierSet::local_grad(std::size_t k, int j) const {
  if ((nyquist[k] >> j) & 1u) return {0.0, 0.0};
  return {0.0, kTwoPi * xi[k * grid.n + j]};
}

std::shared_ptr<const MultiplierSet> build_multipliers(const Grid& grid, const FractionalParams& p, Variant v) {
  if (v == Variant::nonlocal && !p.calibrated())
    throw Error(Errc::domain, "nonlocal multipliers need calibrated params");
  p.validate();
  if (grid.n != p.n) throw Error(Errc::shape_mismatch, "grid and parameter dimensions differ");

  auto m = std::make_shared<MultiplierSet>();
  m->variant = v;
  m->grid = grid;
  m->params = p;

  const std::size_t last_axis = static_cast<std::size_t>(grid.n - 1);
  const std::size_t N_last = grid.shape[last_axis];
  const std::size_t half = N_last / 2 + 1;
  std::vector<std::array<std::size_t, 2>> idx;
  idx.reserve(spectrum_size(grid));
  if (grid.n == 1) {
    for (std::size_t k = 0; k < half; ++k) idx.push_back({k, 0});
  } else {
    for (std::size_t k0 = 0; k0 < grid.shape[0]; ++k0)
      for (std::size_t k1 = 0; k1 < half; ++k1) idx.push_back({k0, k1});
  }
  SymbolTable t = symbols(grid, p, v, idx);
  m->xi = std::move(t.xi);
  m->nyquist = std::move(t.nyq);
  m->grad_imag = std::move(t.grad_imag);
  m->qhat = std::move(t.qhat);
  m->min_g = t.min_g;
  m->distinct_radii = t.distinct;

  m->weight.resize(idx.size());
  m->lap.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t kl = idx[k][last_axis];
    const bool self_conjugate = kl == 0 || (N_last % 2 == 0 && kl == N_last / 2);
    m->weight[k] = self_conjugate ? 1.0 : 2.0;
    double acc = 0.0;
    for (int j = 0; j < grid.n; ++j) acc += m->grad_imag[k * grid.n + j] * m->grad_imag[k * grid.n + j];
    m->lap[k] = -acc;
  }
  return m;
}

std::vector<std::complex<double>> full_lattice_symbol(const Grid& grid, const FractionalParams& p, Variant v) {
  std::vector<std::array<std::size_t, 2>> idx(grid.size());
  for (std::size_t node = 0; node < grid.size(); ++node) idx[node] = grid.multi_index(node);
  const SymbolTable t = symbols(grid, p, v, idx);
  std::vector<std::complex<double>> out(t.grad_imag.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {0.0, t.grad_imag[i]};
  return out;
}

std::vector<std::complex<double>> transform(const Field& f, const Fft& fft) {
  const std::size_t spec = fft.spectrum_size();
  std::vector<std::complex<double>> out(spec * f.components());
  for (int c = 0; c < f.components(); ++c) {
    const std::vector<double> comp = f.component(c);
    fft.forward(comp, std::span(out).subspan(c * spec, spec));
  }
  return out;
}

Field apply_grad(const Field& u, const MultiplierSet& m) {
  check_components(u, m);
  const int n = m.n();
  const int cu = u.components();
  if (cu != 1 && cu != n) throw Error(Errc::shape_mismatch, "gradient takes scalar or vector fields");
  const Fft fft = m.fft();
  const std::size_t spec = fft.spectrum_size();
  const auto uhat = transform(u, fft);
  Field out(u.grid(), cu * n);
  std::vector<std::complex<double>> buf(spec);
  std::vector<double> comp(u.nodes());
  for (int i = 0; i < cu; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < spec; ++k) buf[k] = m.grad(k, j) * uhat[i * spec + k];
      fft.inverse(buf, comp);
      out.set_component(i * n + j, comp);
    }
  }
  return out;
}

Field apply_div(const Field& phi, const MultiplierSet& m) {
  check_components(phi, m);
  const int n = m.n();
  const int c = phi.components();
  if (c != n && c != n * n) throw Error(Errc::shape_mismatch, "divergence takes vector or matrix fields");
  const int rows = c / n;
  const Fft fft = m.fft();
  const std::size_t spec = fft.spectrum_size();
  const auto phat = transform(phi, fft);
  Field out(phi.grid(), rows);
  std::vector<std::complex<double>> buf(spec);
  std::vector<double> comp(phi.nodes());
  for (int i = 0; i < rows; ++i) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (int j = 0; j < n; ++j)
      for (std::size_t k = 0; k < spec; ++k) buf[k] += m.grad(k, j) * phat[(i * n + j) * spec + k];
    fft.inverse(buf, comp);
    out.set_component(i, comp);
  }
  return out;
}

Field apply_laplacian(const Field& u, const MultiplierSet& m) {
  check_components(u, m);
  const Fft fft = m.fft();
  const std::size_t spec = fft.spectrum_size();
  const auto uhat = transform(u, fft);
  Field out(u.grid(), u.components());
  std::vector<std::complex<double>> buf(spec);
  std::vector<double> comp(u.nodes());
  for (int c = 0; c < u.components(); ++c) {
    for (std::size_t k = 0; k < spec; ++k) buf[k] = m.lap[k] * uhat[c * spec + k];
    fft.inverse(buf, comp);
    out.set_component(c, comp);
  }
  return out;
}

namespace {

int square_side(const Field& G) {
  const int n = G.grid().n;
  if (G.components() != n * n) throw Error(Errc::shape_mismatch, "expected a matrix field");
  return n;
}

}  // namespace

Field sym_part(const Field& G) {
  const int n = square_side(G);
  Field out(G.grid(), n * n);
  for (std::size_t x = 0; x < G.nodes(); ++x)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.at(x, i * n + j) = 0.5 * (G.at(x, i * n + j) + G.at(x, j * n + i));
  return out;
}

Field transpose(const Field& G) {
  const int n = square_side(G);
  Field out(G.grid(), n * n);
  for (std::size_t x = 0; x < G.nodes(); ++x)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.at(x, i * n + j) = G.at(x, j * n + i);
  return out;
}

Field trace(const Field& G) {
  const int n = square_side(G);
  Field out(G.grid(), 1);
  for (std::size_t x = 0; x < G.nodes(); ++x) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += G.at(x, i * n + i);
    out.at(x, 0) = t;
  }
  return out;
}

Field times_identity(const Field& f) {
  if (f.components() != 1) throw Error(Errc::shape_mismatch, "expected a scalar field");
  const int n = f.grid().n;
  Field out(f.grid(), n * n);
  for (std::size_t x = 0; x < f.nodes(); ++x)
    for (int i = 0; i < n; ++i) out.at(x, i * n + i) = f.at(x, 0);
  return out;
}

double leakage(const Field& f, std::span<const std::uint8_t> mask) {
  double inside = 0.0, outside = 0.0;
  for (std::size_t x = 0; x < f.nodes(); ++x)
    for (int c = 0; c < f.components(); ++c) {
      const double v = std::abs(f.at(x, c));
      inside = std::max(inside, v);
      if (!mask[x]) outside = std::max(outside, v);
    }
  return inside > 0.0 ? outside / inside : 0.0;
}

}  // namespace nle
