#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jacfc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args[0]` is the program name. A one-line JSON summary
/// goes to `out` on success; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jacfc::cli
