#pragma once

namespace geospread::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 2 singular-kinetic-energy abort (single-point
/// mode), 64 usage error, 74 I/O error. Sweeps return 0 even when some
/// points carry the diverged flag.
inline constexpr int kExitSingular = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

/// Parses argv, runs the selected subcommand, returns the exit code.
/// Never calls std::exit.
int run(int argc, const char* const* argv);

} // namespace geospread::cli
