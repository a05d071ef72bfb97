#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cssr {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNotConverged = 2, kExitUnstable = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cssr
