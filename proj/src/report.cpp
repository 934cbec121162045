#include "nle/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nle/error.hpp"

namespace nle {

void Report::at_most(std::string check, std::string params, double value, double tolerance) {
  rows.push_back({std::move(check), std::move(params), value, tolerance, std::isfinite(value) && value <= tolerance});
}

void Report::at_least(std::string check, std::string params, double value, double tolerance) {
  rows.push_back({std::move(check), std::move(params), value, tolerance, std::isfinite(value) && value >= tolerance});
}

void Report::flag(std::string check, std::string params, double value, double tolerance, bool pass) {
  rows.push_back({std::move(check), std::move(params), value, tolerance, pass});
}

void Report::append(const Report& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }

bool Report::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass; }));
}

std::string Report::csv() const {
  std::string out = "check,params,value,tolerance,pass\n";
  for (const auto& r : rows)
    out += r.check + "," + r.params + "," + format_double(r.value) + "," + format_double(r.tolerance) + "," +
           (r.pass ? "true" : "false") + "\n";
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string param_string(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::io, "cannot write " + tmp.string());
    os << contents;
    if (!os) throw Error(Errc::io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nle
