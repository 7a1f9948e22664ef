#pragma once

#include <iosfwd>

namespace srcp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInvalid = 2;
inline constexpr int kInternal = 3;

// Entry point for the srcpsim tool; subcommands generate, simulate, compare,
// wcet and sweep.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srcp::cli
