#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ffsc::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kBadArguments = 2,
  kResourceCapExceeded = 3,
};

/// Environment variable that overrides the default enumeration cap.
inline constexpr const char* kCapEnvironmentVariable = "FFSC_ENUM_CAP";

/// Parses `args` (args[0] is the program name) and runs one subcommand.
/// Tables go to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ffsc::cli
