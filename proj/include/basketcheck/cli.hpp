#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace basketcheck {

// Exit codes: 0 success (a false verdict is still success), 1 usage or
// parse/bind errors, 2 solver non-convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace basketcheck
