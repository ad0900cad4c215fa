#pragma once
// Command-line front end, factored as a function so the test suite can drive
// it in-process. Exit codes: 0 success, 1 verification failure, 2 bad usage
// or parse error, 3 cap exceeded.

#include <iosfwd>
#include <string>
#include <vector>

namespace dmt {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmt
