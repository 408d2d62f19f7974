#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace axlesim::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kValidation = 2,
    kNumerical = 3,
    kIo = 4,
};

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count after applying the AXLESIM_THREADS cap.
unsigned effective_workers(unsigned requested);

} // namespace axlesim::cli
