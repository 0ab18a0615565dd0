#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace ladder::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_computation = 2;

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// diagnostics (including the error name of a failed computation) to `err`.
/// Returns 0 on success, 1 on a usage error and 2 on a computation error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace ladder::cli
