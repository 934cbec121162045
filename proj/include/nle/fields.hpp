#pragma once

// Uniform periodic grids over a padded box, domain masks and sampled fields.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nle/kernelcore.hpp"

namespace nle {

/// Axis-aligned rectangle in dimension n (1 or 2); unused axes are ignored.
struct Rect {
  int n = 2;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  double side(int axis) const { return hi[axis] - lo[axis]; }
  double min_side() const;
};

/// Uniform grid with nodes origin + i*h; the box [origin, origin + shape*h)
/// is treated as periodic by the spectral operators.
struct Grid {
  int n = 2;
  std::array<std::size_t, 2> shape{1, 1};
  double h = 1.0;
  std::array<double, 2> origin{0.0, 0.0};

  std::size_t size() const noexcept { return n == 1 ? shape[0] : shape[0] * shape[1]; }
  double box_length(int axis) const { return static_cast<double>(shape[axis]) * h; }
  std::array<std::size_t, 2> multi_index(std::size_t node) const;
  std::array<double, 2> point(std::size_t node) const;

  bool operator==(const Grid&) const = default;
};

/// Node masks (0/1) over the grid.
struct DomainMasks {
  std::vector<std::uint8_t> omega;        // closed Omega
  std::vector<std::uint8_t> omega_minus;  // {x in Omega : dist(x, Omega^c) > delta}
  std::vector<std::uint8_t> omega_plus;   // Omega + B(0, delta)
  std::vector<std::uint8_t> collar;       // omega_plus \ omega_minus
};

std::size_t count(std::span<const std::uint8_t> mask);
std::vector<std::size_t> mask_nodes(std::span<const std::uint8_t> mask);

struct Discretization {
  Grid grid;
  Rect omega;
  double delta = 0.0;
  DomainMasks masks;
};

/// True when every prime factor of m is 2, 3 or 5.
bool fft_friendly(std::size_t m);
std::size_t next_fft_friendly(std::size_t m);

/// Builds the padded grid: the box holds Omega_delta plus a margin of
/// padding * (delta + 2h) on every side. Throws horizon_too_large when
/// Omega_{-delta} is empty and resolution_too_coarse when delta < 3h.
Discretization make_grid(const Rect& omega, double h, const FractionalParams& p, double padding = 1.0);

/// Sampled field with `components` values per node (1 scalar, n vector,
/// n*n matrix with entry (i, j) at i*n + j); node-major, component fastest.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int components);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  std::size_t nodes() const noexcept { return grid_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double& at(std::size_t node, int c) { return values_[node * components_ + c]; }
  double at(std::size_t node, int c) const { return values_[node * components_ + c]; }

  std::vector<double> component(int c) const;
  void set_component(int c, std::span<const double> data);

  double max_abs() const;
  bool compatible(const Field& other) const {
    return grid_ == other.grid_ && components_ == other.components_;
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

/// h^n times the masked sum of pointwise component dot products.
double inner_product(const Field& f, const Field& g, std::span<const std::uint8_t> region);
double inner_product(const Field& f, const Field& g);

/// Zero outside `mask`.
Field restrict_to(Field f, std::span<const std::uint8_t> mask);

/// True if the field vanishes exactly on every node outside Omega_{-delta}.
bool is_admissible(const Field& f, const DomainMasks& masks);

/// Smoothstep bump: 1 at the center, 0 from `radius` on.
Field make_bump(std::span<const double> center, double radius, const Grid& grid);
bool bump_fits(std::span<const double> center, double radius, const Discretization& disc);
/// As make_bump but requires the support inside Omega_{-delta}.
Field make_admissible_bump(std::span<const double> center, double radius, const Discretization& disc);

/// u(x) = F x + a (F row-major n x n), sampled at every node.
Field make_affine(std::span<const double> F, std::span<const double> a, const Grid& grid);

/// Product of erf transitions: 1 (to rounding) on the bounding box of
/// Omega_delta, 0 (to rounding) at the periodic box edges.
Field make_plateau(const Discretization& disc);

/// Binary NLF1 field files.
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

}  // namespace nle
