#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vbpbb::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInfeasible = 3;

/// Runs one invocation. `args` excludes the program name. Output files named
/// "-" go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vbpbb::cli
