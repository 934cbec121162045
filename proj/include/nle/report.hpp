#pragma once

// Check tables with the CSV schema check,params,value,tolerance,pass.

#include <filesystem>
#include <string>
#include <vector>

namespace nle {

struct CheckRow {
  std::string check;
  std::string params;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<CheckRow> rows;

  /// Adds a row that passes when value <= tolerance.
  void at_most(std::string check, std::string params, double value, double tolerance);
  /// Adds a row that passes when value >= tolerance.
  void at_least(std::string check, std::string params, double value, double tolerance);
  void flag(std::string check, std::string params, double value, double tolerance, bool pass);
  void append(const Report& other);

  bool pass() const;
  std::size_t failures() const;
  std::string csv() const;
};

/// %.17g
std::string format_double(double v);

/// Joins key=value pairs with ';'.
std::string param_string(const std::vector<std::pair<std::string, std::string>>& kv);

/// Writes to a temporary sibling and renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace nle
