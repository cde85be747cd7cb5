#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace momix {

inline constexpr const char* kVersion = "0.1.0";

// Solver or extraction breakdown surfaced by a command.  Exit code 1.
class SolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full command-line surface: fit, project, bench, gen.  Takes argv without
// the program name.  Returns the process exit code: 0 success, 1 solver or
// extraction failure, 2 input error.
int run_cli(const std::vector<std::string>& args);

}  // namespace momix
