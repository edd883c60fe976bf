#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssm::cli {

// Exit codes: 0 success, 2 usage/config/parse, 3 budget exceeded,
// 4 hypothesis not met, 5 other library errors, 70 internal errors.
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssm::cli
