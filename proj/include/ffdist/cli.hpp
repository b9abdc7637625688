#pragma once

#include <ostream>

namespace ffdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// Parses argv, runs one subcommand and writes its report to `out` (or to
/// the --output file). Diagnostics go to `err`. Returns 0 on success, 1 on
/// usage, IO or guard errors and 2 when an exact identity or a
/// theorem-backed check fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ffdist::cli
