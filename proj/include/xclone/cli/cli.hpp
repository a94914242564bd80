#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

#include "xclone/errors.hpp"

namespace xclone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInterrupted = 130;

int exit_code_for(ErrorKind kind);

// Raised by the SIGINT handler; long-running commands poll it between items.
std::atomic<bool>& interrupt_flag();

// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xclone::cli
