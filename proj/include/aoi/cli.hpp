#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aoi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Entry point of the aoi command-line tool. args excludes the program name.
/// Subcommands: analytic, simulate, sweep, tradeoff, validate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aoi::cli
