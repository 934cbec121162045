#pragma once

// Subcommand drivers of the command-line tool.

#include <ostream>
#include <string>
#include <vector>

#include "nle/config.hpp"

namespace nle {

/// solve, verify, korn, poincare, eringen, symbol, info
const std::vector<std::string>& subcommands();

/// Runs a validated configuration and writes its artifacts under cfg.out.
/// Returns 0 if every check in scope passed and 1 otherwise (including
/// solver and numerical failures, which are reported on `log`).
int run(const RunConfig& cfg, std::ostream& log);

/// Force field of a solve run: zero, bump, two-bump or an NLF1 file.
Field make_force(const std::string& spec, const Discretization& disc);

}  // namespace nle
