#include "nle/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nle/error.hpp"
#include "nle/report.hpp"

namespace nle {

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"n", "spatial dimension, 1 or 2 (default 2)"},
      {"s", "order, 0 < s < 1 (default 0.5)"},
      {"delta", "horizon (default 0.1)"},
      {"b0", "plateau fraction of the cutoff, 0 < b0 < 1 (default 0.5)"},
      {"omega", "rectangle lo0,lo1,hi0,hi1 (n = 2) or lo,hi (n = 1) (default 0,0,1,1)"},
      {"h", "grid spacing, decimal or p/q (default 1/64)"},
      {"variant", "nonlocal or fractional (default nonlocal)"},
      {"mu", "shear modulus (default 1)"},
      {"lambda", "Lame first parameter (default 1)"},
      {"force", "zero, bump, two-bump or an NLF1 file (default bump)"},
      {"tol", "relative CG residual tolerance (default 1e-10)"},
      {"max_iter", "CG iteration cap, 0 = 10 sqrt(dof) (default 0)"},
      {"preconditioner", "frequency-diagonal preconditioner on/off (default off)"},
      {"padding", "box margin factor, >= 1 (default 1)"},
      {"seed", "RNG seed for random fields (default 1)"},
      {"out", "output directory (default nle_out)"},
      {"s_list", "comma-separated sweep over s (default: s)"},
      {"delta_list", "comma-separated sweep over delta (default: delta)"},
      {"h_list", "comma-separated sweep over h (default: h)"},
      {"rho_max", "largest frequency of the symbol table (default 100)"},
      {"samples", "rows of the symbol table (default 101)"},
      {"fields", "random fields per identity check (default 10)"},
      {"trials", "random test functions for the Mercer check (default 100)"},
  };
  return keys;
}

namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& msg) {
  throw Error(Errc::config_parse, where + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) parse_error(where, "not a number: '" + t + "'");
  return v;
}

// Accepts "0.015625" and "1/64".
double to_spacing(const std::string& text, const std::string& where) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return to_double(text, where);
  const double num = to_double(text.substr(0, slash), where);
  const double den = to_double(text.substr(slash + 1), where);
  if (den == 0.0) parse_error(where, "zero denominator");
  return num / den;
}

std::uint64_t to_unsigned(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    parse_error(where, "not a nonnegative integer: '" + t + "'");
  return v;
}

std::vector<double> to_list(const std::string& text, const std::string& where, bool spacing = false) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(spacing ? to_spacing(item, where) : to_double(item, where));
  if (out.empty()) parse_error(where, "empty list");
  return out;
}

bool to_bool(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t == "on" || t == "true" || t == "1" || t == "yes") return true;
  if (t == "off" || t == "false" || t == "0" || t == "no") return false;
  parse_error(where, "expected on/off: '" + t + "'");
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) {
    if (!out.empty()) out += ',';
    out += format_double(x);
  }
  return out;
}

}  // namespace

FractionalParams RunConfig::params() const {
  FractionalParams p;
  p.n = n;
  p.s = s;
  p.delta = delta;
  p.b0 = b0;
  return p;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& raw, const std::string& where) {
  const std::string value = trim(raw);
  if (key == "n") {
    cfg.n = static_cast<int>(to_unsigned(value, where));
  } else if (key == "s") {
    cfg.s = to_double(value, where);
  } else if (key == "delta") {
    cfg.delta = to_double(value, where);
  } else if (key == "b0") {
    cfg.b0 = to_double(value, where);
  } else if (key == "omega") {
    const auto v = to_list(value, where);
    if (v.size() == 4) {
      cfg.omega.lo = {v[0], v[1]};
      cfg.omega.hi = {v[2], v[3]};
    } else if (v.size() == 2) {
      cfg.omega.lo = {v[0], 0.0};
      cfg.omega.hi = {v[1], 0.0};
    } else {
      parse_error(where, "omega needs 2 or 4 numbers");
    }
  } else if (key == "h") {
    cfg.h = to_spacing(value, where);
  } else if (key == "variant") {
    if (value != "nonlocal" && value != "fractional") parse_error(where, "variant must be nonlocal or fractional");
    cfg.variant = parse_variant(value);
  } else if (key == "mu") {
    cfg.mu = to_double(value, where);
  } else if (key == "lambda") {
    cfg.lambda = to_double(value, where);
  } else if (key == "force") {
    if (value.empty()) parse_error(where, "empty force specification");
    cfg.force = value;
  } else if (key == "tol") {
    cfg.tol = to_double(value, where);
  } else if (key == "max_iter") {
    cfg.max_iter = to_unsigned(value, where);
  } else if (key == "preconditioner") {
    cfg.preconditioner = to_bool(value, where);
  } else if (key == "padding") {
    cfg.padding = to_double(value, where);
  } else if (key == "seed") {
    cfg.seed = to_unsigned(value, where);
  } else if (key == "out") {
    if (value.empty()) parse_error(where, "empty output directory");
    cfg.out = value;
  } else if (key == "s_list") {
    cfg.s_list = to_list(value, where);
  } else if (key == "delta_list") {
    cfg.delta_list = to_list(value, where);
  } else if (key == "h_list") {
    cfg.h_list = to_list(value, where, true);
  } else if (key == "rho_max") {
    cfg.rho_max = to_double(value, where);
  } else if (key == "samples") {
    cfg.samples = to_unsigned(value, where);
  } else if (key == "fields") {
    cfg.fields = to_unsigned(value, where);
  } else if (key == "trials") {
    cfg.trials = to_unsigned(value, where);
  } else {
    parse_error(where, "unknown key '" + key + "'");
  }
}

void parse_config_text(const std::string& text, const std::string& source, RunConfig& cfg) {
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    if (trim(body).empty()) continue;
    const auto first = body.find_first_not_of(" \t");
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      parse_error(source + ":" + std::to_string(lineno) + ":" + std::to_string(first + 1), "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty())
      parse_error(source + ":" + std::to_string(lineno) + ":" + std::to_string(first + 1), "missing key");
    const auto vstart = body.find_first_not_of(" \t", eq + 1);
    const std::string col = std::to_string((key.empty() ? first : body.find(key)) + 1);
    const std::string where = source + ":" + std::to_string(lineno) + ":" + col;
    bool known = false;
    for (const auto& [k, d] : config_keys()) known = known || k == key;
    if (!known) parse_error(where, "unknown key '" + key + "'");
    const std::string vwhere =
        source + ":" + std::to_string(lineno) + ":" + std::to_string((vstart == std::string::npos ? eq + 1 : vstart) + 1);
    set_config_value(cfg, key, body.substr(eq + 1), vwhere);
  }
}

void parse_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::config_parse, path.string() + ": cannot read configuration");
  std::stringstream ss;
  ss << is.rdbuf();
  parse_config_text(ss.str(), path.string(), cfg);
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(Errc::config_validation, msg); };
  if (cfg.n != 1 && cfg.n != 2) fail("n must be 1 or 2");
  for (double s : cfg.sweep_s())
    if (!(s > 0.0 && s < 1.0)) fail("s must lie in (0, 1), got " + format_double(s));
  for (double d : cfg.sweep_delta())
    if (!(d > 0.0) || !std::isfinite(d)) fail("delta must be positive, got " + format_double(d));
  for (double h : cfg.sweep_h())
    if (!(h > 0.0) || !std::isfinite(h)) fail("h must be positive, got " + format_double(h));
  if (!(cfg.b0 > 0.0 && cfg.b0 < 1.0)) fail("b0 must lie in (0, 1)");
  for (int a = 0; a < cfg.n; ++a)
    if (!(cfg.omega.hi[a] > cfg.omega.lo[a])) fail("omega must have positive side lengths");
  if (!(cfg.mu > 0.0)) fail("mu must be positive");
  if (!(2.0 * cfg.mu + cfg.n * cfg.lambda > 0.0)) fail("2 mu + n lambda must be positive");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) fail("tol must lie in (0, 1)");
  if (!(cfg.padding >= 1.0)) fail("padding must be at least 1");
  if (!(cfg.rho_max > 0.0)) fail("rho_max must be positive");
  if (cfg.samples < 2) fail("samples must be at least 2");
  if (cfg.trials < 1) fail("trials must be at least 1");
  if (cfg.fields < 1) fail("fields must be at least 1");
  Rect om = cfg.omega;
  om.n = cfg.n;
  for (double d : cfg.sweep_delta()) {
    if (!(d < 0.5 * om.min_side())) fail("horizon " + format_double(d) + " leaves Omega_{-delta} empty");
    for (double h : cfg.sweep_h())
      if (d < 3.0 * h * (1.0 - 1e-12)) fail("delta " + format_double(d) + " < 3h for h = " + format_double(h));
  }
}

std::string resolved_config(const RunConfig& cfg) {
  std::string out = "# effective configuration of '" + cfg.command + "'\n";
  auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  line("n", std::to_string(cfg.n));
  line("s", format_double(cfg.s));
  line("delta", format_double(cfg.delta));
  line("b0", format_double(cfg.b0));
  if (cfg.n == 1)
    line("omega", format_double(cfg.omega.lo[0]) + "," + format_double(cfg.omega.hi[0]));
  else
    line("omega", format_double(cfg.omega.lo[0]) + "," + format_double(cfg.omega.lo[1]) + "," +
                      format_double(cfg.omega.hi[0]) + "," + format_double(cfg.omega.hi[1]));
  line("h", format_double(cfg.h));
  line("variant", to_string(cfg.variant));
  line("mu", format_double(cfg.mu));
  line("lambda", format_double(cfg.lambda));
  line("force", cfg.force);
  line("tol", format_double(cfg.tol));
  line("max_iter", std::to_string(cfg.max_iter));
  line("preconditioner", cfg.preconditioner ? "on" : "off");
  line("padding", format_double(cfg.padding));
  line("seed", std::to_string(cfg.seed));
  line("out", cfg.out.string());
  line("s_list", join(cfg.sweep_s()));
  line("delta_list", join(cfg.sweep_delta()));
  line("h_list", join(cfg.sweep_h()));
  line("rho_max", format_double(cfg.rho_max));
  line("samples", std::to_string(cfg.samples));
  line("fields", std::to_string(cfg.fields));
  line("trials", std::to_string(cfg.trials));
  return out;
}

}  // namespace nle
