#pragma once

#include <iosfwd>

namespace nexp::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_invalid_input = 2;

// Parses argv, runs one subcommand, writes the JSON report to `out` (and to
// --out dir/<command>.json when given). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nexp::cli
