#pragma once

// The sqgame command line, callable in-process. Exit codes: 0 pass,
// 1 checked-and-failed verdict, 2 invalid input, 3 non-convergence.

#include <iosfwd>
#include <string>
#include <vector>

namespace sqgame::cli {

enum ExitCode : int { kPass = 0, kFailed = 1, kInvalid = 2, kNotConverged = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqgame::cli
