#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qarrival::io {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2 };

/// Entry point of the `qarrival` tool; args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

} // namespace qarrival::io
