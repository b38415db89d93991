#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tnli::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;     // validation, parse, join or usage errors
inline constexpr int kInternalError = 2;  // invariant violations

// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tnli::cli
