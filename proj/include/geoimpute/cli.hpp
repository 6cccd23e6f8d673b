#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geoimpute {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

/// Runs one `geoimpute` invocation. `args` includes the program name.
/// Subcommands: impute, split, benchmark, synth.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geoimpute
