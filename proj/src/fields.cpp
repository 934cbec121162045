#include "nle/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nle/error.hpp"

namespace nle {

double Rect::min_side() const { return n == 1 ? side(0) : std::min(side(0), side(1)); }

std::array<std::size_t, 2> Grid::multi_index(std::size_t node) const {
  if (n == 1) return {node, 0};
  return {node / shape[1], node % shape[1]};
}

std::array<double, 2> Grid::point(std::size_t node) const {
  const auto idx = multi_index(node);
  std::array<double, 2> x{origin[0] + static_cast<double>(idx[0]) * h, 0.0};
  if (n == 2) x[1] = origin[1] + static_cast<double>(idx[1]) * h;
  return x;
}

std::size_t count(std::span<const std::uint8_t> mask) {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](auto v) { return v != 0; }));
}

std::vector<std::size_t> mask_nodes(std::span<const std::uint8_t> mask) {
  std::vector<std::size_t> out;
  out.reserve(count(mask));
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

bool fft_friendly(std::size_t m) {
  if (m == 0) return false;
  for (std::size_t p : {2u, 3u, 5u})
    while (m % p == 0) m /= p;
  return m == 1;
}

std::size_t next_fft_friendly(std::size_t m) {
  while (!fft_friendly(m)) ++m;
  return m;
}

Discretization make_grid(const Rect& omega, double h, const FractionalParams& p, double padding) {
  p.validate();
  if (omega.n != p.n) throw Error(Errc::shape_mismatch, "domain and parameter dimensions differ");
  if (!(h > 0.0)) throw Error(Errc::domain, "grid spacing must be positive");
  if (!(padding >= 1.0)) throw Error(Errc::domain, "padding factor must be at least 1");
  for (int a = 0; a < omega.n; ++a)
    if (!(omega.side(a) > 0.0)) throw Error(Errc::domain, "degenerate domain rectangle");
  if (!(p.delta < 0.5 * omega.min_side()))
    throw Error(Errc::horizon_too_large, "Omega_{-delta} is empty for this horizon");
  if (p.delta < 3.0 * h * (1.0 - 1e-12))
    throw Error(Errc::resolution_too_coarse, "delta < 3h leaves the kernel under-resolved");

  const double eps = 1e-9 * h;
  const double margin = padding * (p.delta + 2.0 * h);
  Discretization d;
  d.omega = omega;
  d.delta = p.delta;
  Grid& g = d.grid;
  g.n = p.n;
  g.h = h;
  for (int a = 0; a < p.n; ++a) {
    const auto left = static_cast<std::size_t>(std::ceil((p.delta + margin) / h - 1e-9));
    const auto span_right = static_cast<std::size_t>(std::ceil((omega.side(a) + p.delta + margin) / h - 1e-9));
    const std::size_t required = left + span_right + 1;
    const std::size_t total = next_fft_friendly(required);
    const std::size_t offset = left + (total - required) / 2;
    g.shape[a] = total;
    g.origin[a] = omega.lo[a] - static_cast<double>(offset) * h;
  }

  const std::size_t nn = g.size();
  DomainMasks& m = d.masks;
  m.omega.assign(nn, 0);
  m.omega_minus.assign(nn, 0);
  m.omega_plus.assign(nn, 0);
  m.collar.assign(nn, 0);
  for (std::size_t i = 0; i < nn; ++i) {
    const auto x = g.point(i);
    bool in_omega = true;
    bool in_minus = true;
    double dist2 = 0.0;
    for (int a = 0; a < p.n; ++a) {
      in_omega = in_omega && x[a] >= omega.lo[a] - eps && x[a] <= omega.hi[a] + eps;
      in_minus = in_minus && x[a] > omega.lo[a] + p.delta + eps && x[a] < omega.hi[a] - p.delta - eps;
      const double out = std::max({omega.lo[a] - x[a], 0.0, x[a] - omega.hi[a]});
      dist2 += out * out;
    }
    const bool in_plus = std::sqrt(dist2) < p.delta - eps;
    m.omega[i] = in_omega;
    m.omega_minus[i] = in_minus;
    m.omega_plus[i] = in_plus;
    m.collar[i] = in_plus && !in_minus;
  }
  if (count(m.omega_minus) == 0)
    throw Error(Errc::horizon_too_large, "no grid node lies in Omega_{-delta}");
  return d;
}

// ---------------------------------------------------------------------------

Field::Field(const Grid& grid, int components)
    : grid_(grid), components_(components), values_(grid.size() * static_cast<std::size_t>(components), 0.0) {
  if (components < 1) throw Error(Errc::shape_mismatch, "field needs at least one component");
}

std::vector<double> Field::component(int c) const {
  std::vector<double> out(nodes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i * components_ + c];
  return out;
}

void Field::set_component(int c, std::span<const double> data) {
  if (data.size() != nodes()) throw Error(Errc::shape_mismatch, "component length mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) values_[i * components_ + c] = data[i];
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Field& Field::operator+=(const Field& other) {
  if (!compatible(other)) throw Error(Errc::shape_mismatch, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!compatible(other)) throw Error(Errc::shape_mismatch, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

double inner_product(const Field& f, const Field& g, std::span<const std::uint8_t> region) {
  if (!f.compatible(g)) throw Error(Errc::shape_mismatch, "inner product of incompatible fields");
  if (region.size() != f.nodes()) throw Error(Errc::shape_mismatch, "region mask length");
  const int c = f.components();
  const auto fv = f.values();
  const auto gv = g.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    if (!region[i]) continue;
    for (int k = 0; k < c; ++k) acc += fv[i * c + k] * gv[i * c + k];
  }
  return std::pow(f.grid().h, f.grid().n) * acc;
}

double inner_product(const Field& f, const Field& g) {
  if (!f.compatible(g)) throw Error(Errc::shape_mismatch, "inner product of incompatible fields");
  const auto fv = f.values();
  const auto gv = g.values();
  const double acc = std::inner_product(fv.begin(), fv.end(), gv.begin(), 0.0);
  return std::pow(f.grid().h, f.grid().n) * acc;
}

Field restrict_to(Field f, std::span<const std::uint8_t> mask) {
  if (mask.size() != f.nodes()) throw Error(Errc::shape_mismatch, "mask length");
  for (std::size_t i = 0; i < f.nodes(); ++i)
    if (!mask[i])
      for (int c = 0; c < f.components(); ++c) f.at(i, c) = 0.0;
  return f;
}

bool is_admissible(const Field& f, const DomainMasks& masks) {
  if (masks.omega_minus.size() != f.nodes()) return false;
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    if (masks.omega_minus[i]) continue;
    for (int c = 0; c < f.components(); ++c)
      if (f.at(i, c) != 0.0) return false;
  }
  return true;
}

Field make_bump(std::span<const double> center, double radius, const Grid& grid) {
  if (static_cast<int>(center.size()) != grid.n) throw Error(Errc::shape_mismatch, "bump center dimension");
  if (!(radius > 0.0)) throw Error(Errc::domain, "bump radius must be positive");
  Field f(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    double r2 = 0.0;
    for (int a = 0; a < grid.n; ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    f.at(i, 0) = smoothstep(std::sqrt(r2) / radius);
  }
  return f;
}

bool bump_fits(std::span<const double> center, double radius, const Discretization& disc) {
  for (int a = 0; a < disc.grid.n; ++a) {
    if (!(center[a] - radius > disc.omega.lo[a] + disc.delta)) return false;
    if (!(center[a] + radius < disc.omega.hi[a] - disc.delta)) return false;
  }
  return true;
}

Field make_admissible_bump(std::span<const double> center, double radius, const Discretization& disc) {
  if (!bump_fits(center, radius, disc))
    throw Error(Errc::support_violation, "bump support leaves Omega_{-delta}");
  return restrict_to(make_bump(center, radius, disc.grid), disc.masks.omega_minus);
}

Field make_affine(std::span<const double> F, std::span<const double> a, const Grid& grid) {
  const auto n = static_cast<std::size_t>(grid.n);
  if (F.size() != n * n || a.size() != n) throw Error(Errc::shape_mismatch, "affine map dimensions");
  Field f(grid, grid.n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    for (std::size_t r = 0; r < n; ++r) {
      double v = a[r];
      for (std::size_t c = 0; c < n; ++c) v += F[r * n + c] * x[c];
      f.at(i, static_cast<int>(r)) = v;
    }
  }
  return f;
}

Field make_plateau(const Discretization& disc) {
  const Grid& g = disc.grid;
  // Per axis: erf transitions centred halfway through the free margin, with
  // the flat region 6.5 standard widths away from each transition centre.
  std::array<double, 2> left{}, right{}, width{};
  for (int a = 0; a < g.n; ++a) {
    const double inner_lo = disc.omega.lo[a] - disc.delta;
    const double inner_hi = disc.omega.hi[a] + disc.delta;
    const double box_lo = g.origin[a];
    const double box_hi = g.origin[a] + g.box_length(a) - g.h;
    const double margin = std::min(inner_lo - box_lo, box_hi - inner_hi);
    left[a] = inner_lo - 0.5 * margin;
    right[a] = inner_hi + 0.5 * margin;
    width[a] = 0.5 * margin / 6.5;
  }
  Field f(g, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(i);
    double v = 1.0;
    for (int a = 0; a < g.n; ++a)
      v *= 0.5 * (std::erf((x[a] - left[a]) / width[a]) - std::erf((x[a] - right[a]) / width[a]));
    f.at(i, 0) = v;
  }
  return f;
}

}  // namespace nle
