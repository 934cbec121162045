#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "nle/error.hpp"
#include "nle/fields.hpp"

static_assert(std::endian::native == std::endian::little, "NLF1 I/O assumes a little-endian host");

namespace nle {

namespace {

constexpr char kMagic[4] = {'N', 'L', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const char* what) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw Error(Errc::format, std::string("truncated header (") + what + ")");
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const Field& f) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::io, "cannot open " + tmp.string() + " for writing");
    const Grid& g = f.grid();
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(g.n));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.components()));
    put<std::uint16_t>(os, 0);
    for (int a = 0; a < g.n; ++a) put<std::uint64_t>(os, g.shape[a]);
    for (int a = 0; a < g.n; ++a) put<double>(os, g.origin[a]);
    put<double>(os, g.h);
    const auto v = f.values();
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!os) throw Error(Errc::io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io, "cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(Errc::format, "bad magic in " + path.string());
  const auto version = get<std::uint32_t>(is, "version");
  if (version != kVersion)
    throw Error(Errc::unsupported_version, "NLF version " + std::to_string(version));
  const int n = get<std::uint8_t>(is, "dimension");
  const int c = get<std::uint8_t>(is, "components");
  get<std::uint16_t>(is, "reserved");
  if (n != 1 && n != 2) throw Error(Errc::format, "dimension must be 1 or 2");
  if (c < 1) throw Error(Errc::format, "component count must be positive");

  Grid g;
  g.n = n;
  std::uint64_t total = static_cast<std::uint64_t>(c);
  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint64_t>::max() / sizeof(double);
  for (int a = 0; a < n; ++a) {
    const auto m = get<std::uint64_t>(is, "shape");
    if (m == 0 || total > kLimit / m) throw Error(Errc::format, "shape overflow");
    total *= m;
    g.shape[a] = static_cast<std::size_t>(m);
  }
  for (int a = 0; a < n; ++a) g.origin[a] = get<double>(is, "origin");
  g.h = get<double>(is, "spacing");
  if (!(g.h > 0.0)) throw Error(Errc::format, "spacing must be positive");

  // Compare the declared payload with the bytes actually present before allocating.
  const auto header_end = is.tellg();
  is.seekg(0, std::ios::end);
  const auto remaining = static_cast<std::uint64_t>(is.tellg() - header_end);
  if (remaining < total * sizeof(double)) throw Error(Errc::format, "truncated payload");
  is.seekg(header_end);

  Field f(g, c);
  auto v = f.values();
  if (!is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double))))
    throw Error(Errc::format, "truncated payload");
  return f;
}

}  // namespace nle
