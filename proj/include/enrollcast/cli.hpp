#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enrollcast {

// Entry point of the `enrollcast` command line. `args` includes the program
// name. Returns the process exit status (0 success, 1 failure); data goes to
// files or `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace enrollcast
