#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace shrinkreg {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the shrinkreg tool: fit, cv, simulate and risk-curve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "0,0.5,1" or "start:stop:count" (count points, both ends included).
std::vector<double> parse_delta_grid(std::string_view text);

}  // namespace shrinkreg
