#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mapstruct::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitNoStructure = 3,
  kExitNoSeparation = 4,
};

// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mapstruct::cli
