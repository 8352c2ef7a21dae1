#pragma once

#include <iosfwd>

namespace inputsafe {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitBlowup = 3;

// Entry point shared by the executable and the tests.
//   run      --scenario <name|file> [--variant V] [--dt F] [--T F] [--out PATH] [--zoh]
//   compare  --scenario <name|file> --variants a,b,c [--out DIR]
//   dump     --scenario <name|file>
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inputsafe
