#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ritzbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Normal output goes
/// to `out`, diagnostics to `err`. Returns 0 on success, 2 on usage or
/// validation errors and 1 on runtime failures.
int parse_and_dispatch(const std::vector<std::string> &args, std::ostream &out,
                       std::ostream &err);

} // namespace ritzbound::cli
