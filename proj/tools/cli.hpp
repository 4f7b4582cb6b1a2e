#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imc2::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;            // included (any flavour), accepted, success
inline constexpr int kNegative = 1;      // not included, rejected
inline constexpr int kUsageError = 2;    // usage, parse or guard error

// Runs `imc2 <args...>` (args excludes the program name) and returns the exit
// code. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imc2::cli
