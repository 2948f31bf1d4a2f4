#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfp::cli {

/// Exit codes: 0 success, 1 input/parse error, 2 mathematical precondition failure.
enum ExitCode : int { kOk = 0, kInputError = 1, kMathError = 2 };

/// Runs one command. args[0] is the program name, as in argv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfp::cli
