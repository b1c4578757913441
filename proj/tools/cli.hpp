#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace lightcone::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kCheckFailed = 2,
  kInvalidInput = 3,
  kBadConfig = 4,
};

/// Named tolerances used by the verification and global suites; each can be
/// overridden with --tol NAME=VALUE.
std::map<std::string, double> default_tolerances();

/// Entry point of the `lightcone` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lightcone::cli
