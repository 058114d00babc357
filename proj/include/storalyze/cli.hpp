#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace storalyze::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kUndefined = 3,
};

/// Runs one subcommand. `args` includes the program name. Diagnostics go to
/// `err`, short progress lines to `out`; artifacts are written under the
/// output directory.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, const char* const* argv);

}  // namespace storalyze::cli
