#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace camtamper {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,
  kExitIo = 2,
  kExitConfig = 3,
};

/// Runs the command line in-process. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace camtamper
