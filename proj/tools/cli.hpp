#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quattrack::cli {

// Runs one CLI command.  args excludes the program name.  Exit codes are a
// stable contract: 0 success, 1 verification failure, 2 configuration
// error (bad flags, bad config file, bad values), 3 numerical abort.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace quattrack::cli
