#pragma once

#include <iosfwd>

namespace flyai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point shared by the `flyai` binary and the tests. Subcommands:
// rng-stats, simulate-fly, tournament, play, serve.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace flyai::cli
