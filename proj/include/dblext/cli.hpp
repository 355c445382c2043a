#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dblext {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (args excludes the program name). The report goes to
/// `out`, diagnostics for usage and structural errors to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dblext
