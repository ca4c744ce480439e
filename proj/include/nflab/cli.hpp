#pragma once

#include <ostream>
#include <string>

#include "nflab/sphere.hpp"

namespace nflab {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegraded = 3;
inline constexpr int kExitVerification = 4;

/// Parses a point literal such as "0", "-1", "0.5+2*i" or "inf".
SpherePoint parse_point(const std::string& text);

/// Formats with 15 decimals and trailing zeros removed.
std::string format_metric(double v);

/// Runs the command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nflab
