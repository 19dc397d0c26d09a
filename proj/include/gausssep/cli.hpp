#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gausssep::cli {

/// Runs one command (args exclude the program name). Returns the process
/// exit code: 0 success, 2 usage error, 3 domain error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace gausssep::cli
