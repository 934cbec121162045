#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nle/error.hpp"
#include "nle/fft.hpp"
#include "nle/fields.hpp"

using namespace nle;

namespace {

FractionalParams params(int n = 2, double delta = 0.1) { return FractionalParams::make(n, 0.5, delta); }

Rect unit(int n) {
  Rect r;
  r.n = n;
  r.lo = {0.0, 0.0};
  r.hi = {1.0, n == 2 ? 1.0 : 0.0};
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nle_test_" + name);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::domain;
}

}  // namespace

TEST(Grid, FftFriendlySizes) {
  EXPECT_TRUE(fft_friendly(1));
  EXPECT_TRUE(fft_friendly(360));
  EXPECT_FALSE(fft_friendly(7));
  EXPECT_FALSE(fft_friendly(0));
  EXPECT_EQ(next_fft_friendly(97), 100u);
  EXPECT_EQ(next_fft_friendly(128), 128u);
}

TEST(Grid, MasksNestAndBoxHoldsMargin) {
  for (int n : {1, 2}) {
    const auto disc = make_grid(unit(n), 1.0 / 64.0, params(n));
    const Grid& g = disc.grid;
    for (int a = 0; a < n; ++a) {
      EXPECT_TRUE(fft_friendly(g.shape[a]));
      // The box must leave delta + 2h beyond Omega_delta on both sides.
      EXPECT_LE(g.origin[a], -0.1 - (0.1 + 2.0 / 64.0) + 1e-12);
      EXPECT_GE(g.origin[a] + g.box_length(a) - g.h, 1.1 + (0.1 + 2.0 / 64.0) - 1e-12);
      // Nodes align with the lower edge of Omega.
      const double k = (0.0 - g.origin[a]) / g.h;
      EXPECT_NEAR(k, std::round(k), 1e-9);
    }
    const auto& m = disc.masks;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (m.omega_minus[i]) EXPECT_TRUE(m.omega[i]);
      if (m.omega[i]) EXPECT_TRUE(m.omega_plus[i]);
      EXPECT_EQ(m.collar[i], m.omega_plus[i] && !m.omega_minus[i]);
    }
    EXPECT_GT(count(m.omega_minus), 0u);
  }
}

TEST(Grid, OmegaMinusCountOnUnitSquare) {
  // Nodes i/64 with 0.1 < i/64 < 0.9: i = 7..57.
  const auto disc = make_grid(unit(2), 1.0 / 64.0, params());
  EXPECT_EQ(count(disc.masks.omega_minus), 51u * 51u);
  EXPECT_EQ(count(disc.masks.omega), 65u * 65u);
}

TEST(Grid, GeometryErrors) {
  EXPECT_EQ(code_of([] { make_grid(unit(2), 1.0 / 64.0, params(2, 0.5)); }), Errc::horizon_too_large);
  EXPECT_EQ(code_of([] { make_grid(unit(2), 0.05, params(2, 0.1)); }), Errc::resolution_too_coarse);
  EXPECT_EQ(code_of([] { make_grid(unit(1), 0.01, params(2)); }), Errc::shape_mismatch);
  EXPECT_EQ(code_of([] { make_grid(unit(2), 0.01, params(), 0.5); }), Errc::domain);
  // delta = 3h exactly is allowed.
  EXPECT_NO_THROW(make_grid(unit(2), 0.1 / 3.0, params()));
}

TEST(Field, ArithmeticAndInnerProducts) {
  const auto disc = make_grid(unit(2), 1.0 / 32.0, params());
  Field a(disc.grid, 2), b(disc.grid, 2);
  for (std::size_t i = 0; i < a.nodes(); ++i) {
    a.at(i, 0) = 1.0;
    b.at(i, 1) = 2.0;
  }
  EXPECT_EQ(inner_product(a, b), 0.0);
  const Field c = a + b;
  const double h2 = std::pow(disc.grid.h, 2);
  EXPECT_NEAR(inner_product(c, c), 5.0 * h2 * static_cast<double>(c.nodes()), 1e-9);
  EXPECT_NEAR(inner_product(c, a, disc.masks.omega), h2 * static_cast<double>(count(disc.masks.omega)), 1e-12);
  Field s(disc.grid, 1);
  EXPECT_THROW(a += s, Error);
  EXPECT_THROW(Field(disc.grid, 0), Error);
}

TEST(Field, BumpsAndAdmissibility) {
  const auto disc = make_grid(unit(2), 1.0 / 64.0, params());
  const double c[] = {0.5, 0.5};
  EXPECT_TRUE(bump_fits(c, 0.39, disc));
  EXPECT_FALSE(bump_fits(c, 0.4, disc));
  const Field b = make_admissible_bump(c, 0.39, disc);
  EXPECT_TRUE(is_admissible(b, disc.masks));
  EXPECT_THROW(make_admissible_bump(c, 0.45, disc), Error);
  EXPECT_FALSE(is_admissible(make_bump(c, 0.45, disc.grid), disc.masks));
  double peak = 0.0;
  for (std::size_t i = 0; i < b.nodes(); ++i) peak = std::max(peak, b.at(i, 0));
  EXPECT_EQ(peak, 1.0);
}

TEST(Field, AffineAndPlateau) {
  const auto disc = make_grid(unit(2), 1.0 / 32.0, params(), 4.0);
  const double F[] = {1.0, 2.0, -1.0, 0.5};
  const double a[] = {0.25, -0.75};
  const Field u = make_affine(F, a, disc.grid);
  for (std::size_t i = 0; i < u.nodes(); i += 17) {
    const auto x = disc.grid.point(i);
    EXPECT_NEAR(u.at(i, 0), 0.25 + x[0] + 2.0 * x[1], 1e-14);
    EXPECT_NEAR(u.at(i, 1), -0.75 - x[0] + 0.5 * x[1], 1e-14);
  }
  const Field p = make_plateau(disc);
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    if (disc.masks.omega_plus[i]) EXPECT_NEAR(p.at(i, 0), 1.0, 1e-15);
    const auto idx = disc.grid.multi_index(i);
    if (idx[0] == 0 || idx[1] == 0) EXPECT_LT(std::abs(p.at(i, 0)), 1e-15);
  }
}

TEST(FieldIO, RoundTripIsBitExact) {
  const auto disc = make_grid(unit(2), 1.0 / 32.0, params());
  Field f(disc.grid, 2);
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    f.at(i, 0) = std::sin(0.1 * static_cast<double>(i));
    f.at(i, 1) = 1.0 / (1.0 + static_cast<double>(i));
  }
  const auto path = temp_file("roundtrip.nlf");
  write_field(path, f);
  const Field g = read_field(path);
  EXPECT_TRUE(g.grid() == f.grid());
  ASSERT_EQ(g.components(), 2);
  for (std::size_t i = 0; i < f.values().size(); ++i) EXPECT_EQ(f.values()[i], g.values()[i]);
  std::filesystem::remove(path);

  Rect r1 = unit(1);
  const auto d1 = make_grid(r1, 1.0 / 64.0, params(1));
  Field one(d1.grid, 1);
  one.at(3, 0) = 2.5;
  write_field(path, one);
  EXPECT_EQ(read_field(path).at(3, 0), 2.5);
  std::filesystem::remove(path);
}

TEST(FieldIO, RejectsMalformedFiles) {
  const auto disc = make_grid(unit(2), 1.0 / 32.0, params());
  const Field f(disc.grid, 1);
  const auto path = temp_file("bad.nlf");
  write_field(path, f);
  std::string bytes;
  {
    std::ifstream is(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(is), {});
  }
  auto write_bytes = [&](const std::string& b) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << b;
  };
  std::string bad = bytes;
  bad[0] = 'X';
  write_bytes(bad);
  EXPECT_EQ(code_of([&] { read_field(path); }), Errc::format);
  bad = bytes;
  bad[4] = 2;
  write_bytes(bad);
  EXPECT_EQ(code_of([&] { read_field(path); }), Errc::unsupported_version);
  write_bytes(bytes.substr(0, bytes.size() - 8));
  EXPECT_EQ(code_of([&] { read_field(path); }), Errc::format);
  write_bytes(bytes.substr(0, 10));
  EXPECT_EQ(code_of([&] { read_field(path); }), Errc::format);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { read_field(path); }), Errc::io);
}

TEST(Fft, RoundTripAndNormalization) {
  const auto disc = make_grid(unit(2), 1.0 / 32.0, params());
  const Fft fft(disc.grid);
  EXPECT_EQ(fft.spectrum_size(), disc.grid.shape[0] * (disc.grid.shape[1] / 2 + 1));
  std::vector<double> x(fft.real_size()), y(fft.real_size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(0.37 * static_cast<double>(i * i % 101));
  std::vector<std::complex<double>> X(fft.spectrum_size());
  fft.forward(x, X);
  double sum = 0.0;
  for (double v : x) sum += v;
  EXPECT_NEAR(X[0].real(), sum, 1e-10);
  const auto X0 = X;
  fft.inverse(X, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-14);
  for (std::size_t k = 0; k < X.size(); ++k) EXPECT_EQ(X[k], X0[k]);
}
