#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lse::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kInvalidConfig = 2 };

/// Entry point of the `lse` tool. `args` excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lse::cli
