#include "nle/error.hpp"

namespace nle {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::domain: return "domain error";
    case Errc::singularity: return "singularity";
    case Errc::quadrature: return "quadrature error";
    case Errc::horizon_too_large: return "horizon too large";
    case Errc::resolution_too_coarse: return "resolution too coarse";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::support_violation: return "support violation";
    case Errc::format: return "format error";
    case Errc::unsupported_version: return "unsupported version";
    case Errc::io: return "i/o error";
    case Errc::not_spd: return "not SPD";
    case Errc::max_iterations: return "max iterations";
    case Errc::operator_not_injective: return "operator not injective";
    case Errc::grid_too_large: return "grid too large";
    case Errc::config_parse: return "parse error";
    case Errc::config_validation: return "validation error";
  }
  return "unknown error";
}

}  // namespace nle
