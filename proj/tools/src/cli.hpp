#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace elprov::cli {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kUnsat = 3, kOracleMismatch = 4 };

// args excludes the program name. Results go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elprov::cli
