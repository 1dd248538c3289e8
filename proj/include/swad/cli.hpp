#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swad::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // unreadable data, I/O errors
inline constexpr int kConfigError = 2;
inline constexpr int kNumericError = 3;

// Runs `swad <command> ...` with the given arguments (args[0] is the program
// name). Progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swad::cli
