#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psga::cli {

/// Entry point for the `psga` tool: gen | solve | exact | bounds | bench.
/// Returns the process exit status; diagnostics go to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args[0] is the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psga::cli
