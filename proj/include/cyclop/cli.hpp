#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cyclop::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
  kOk = 0,
  /// Negative verdict: invalid proof, trace condition fails, or the
  /// requested transformation was refused.
  kNegative = 1,
  /// Usage, IO or parse error.
  kUsage = 2,
};

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cyclop::cli
