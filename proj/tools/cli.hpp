#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dokconst {

// Exit codes: 0 success, 1 a check failed, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dokconst
