#pragma once

// Flat `key = value` run configuration for the command-line tool.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nle/fields.hpp"
#include "nle/kernelcore.hpp"

namespace nle {

struct RunConfig {
  std::string command;

  int n = 2;
  double s = 0.5;
  double delta = 0.1;
  double b0 = 0.5;
  Rect omega;
  double h = 1.0 / 64.0;
  Variant variant = Variant::nonlocal;
  double mu = 1.0;
  double lambda = 1.0;
  std::string force = "bump";  // zero, bump, two-bump or an NLF1 path
  double tol = 1e-10;
  std::size_t max_iter = 0;
  bool preconditioner = false;
  double padding = 1.0;
  std::uint64_t seed = 1;
  std::filesystem::path out = "nle_out";
  std::vector<double> s_list;
  std::vector<double> delta_list;
  std::vector<double> h_list;
  double rho_max = 100.0;
  std::size_t samples = 101;
  std::size_t fields = 10;
  std::size_t trials = 100;

  FractionalParams params() const;
  /// Effective sweep lists (single-element defaults from s, delta, h).
  std::vector<double> sweep_s() const { return s_list.empty() ? std::vector<double>{s} : s_list; }
  std::vector<double> sweep_delta() const { return delta_list.empty() ? std::vector<double>{delta} : delta_list; }
  std::vector<double> sweep_h() const { return h_list.empty() ? std::vector<double>{h} : h_list; }
};

/// Known keys, in resolved.cfg order, with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Sets one key. `where` (e.g. "run.cfg:3:1") prefixes parse errors.
/// Throws Errc::config_parse for unknown keys or malformed values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);

/// Parses a file; errors name line and column.
void parse_config_file(const std::filesystem::path& path, RunConfig& cfg);
void parse_config_text(const std::string& text, const std::string& source, RunConfig& cfg);

/// Range checks; throws Errc::config_validation.
void validate(const RunConfig& cfg);

/// All effective values as `key = value` lines.
std::string resolved_config(const RunConfig& cfg);

}  // namespace nle
