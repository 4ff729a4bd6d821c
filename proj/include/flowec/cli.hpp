#pragma once

#include <iosfwd>

namespace flowec::cli {

inline constexpr int kExitEquivalent = 0;
inline constexpr int kExitNotEquivalent = 1;
inline constexpr int kExitUnknown = 2; // also every usage, parse, IO or mapping error

inline constexpr int kReportVersion = 1;

/// Runs `flowec <subcommand> ...` with the given streams. argv[0] is the
/// program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace flowec::cli
