#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sis::cli {

inline constexpr const char* kToolName = "sisctl";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kArgumentError = 2,
  kCapabilityError = 3,
  kBoundViolation = 4,
};

/// Entry point behind the sisctl binary. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sis::cli
