#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ompadvisor {

// Entry point shared by the binary and the tests. `args` excludes the
// program name. Exit codes: 0 success, 1 input or configuration problem,
// 2 numeric failure, 3 input-file parse failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ompadvisor
