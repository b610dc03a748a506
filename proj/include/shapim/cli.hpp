#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace shapim {

/// Exit code for usage errors (unknown flag, missing required flag, bad value).
inline constexpr int kUsageExit = 2;

/// Entry point for the `shapim` tool. `args` excludes the program name.
/// Subcommands: seed-select, evaluate, experiment, ldag-dump. Returns 0 on
/// success, kUsageExit on usage errors and 1 on runtime failures; diagnostics
/// go to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace shapim
