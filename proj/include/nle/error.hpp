#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nle {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class Errc {
  domain,             // argument outside the mathematical domain
  singularity,        // evaluation at a kernel singularity
  quadrature,         // accuracy target not reached
  horizon_too_large,  // Omega_{-delta} would be empty
  resolution_too_coarse,
  shape_mismatch,
  support_violation,
  format,
  unsupported_version,
  io,
  not_spd,
  max_iterations,
  operator_not_injective,
  grid_too_large,
  config_parse,
  config_validation,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nle
