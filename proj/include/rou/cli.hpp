#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rou {

// Entry point of the `rou` tool; `args` excludes the program name.
// Exit codes: 0 success, 1 an experiment check failed, 2 usage or config error.
int run_cli(const std::vector<std::string>& args);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rou
