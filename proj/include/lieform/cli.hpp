#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lieform {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes of the command-line surface.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitMismatch = 2, kExitDecompositionFailed = 3 };

/// Runs one `lieform` invocation; args excludes the program name.
/// Payloads go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lieform
