#pragma once
// The rational-kit command line, callable in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace ratkit {

// args excludes the program name. Exit codes: 0 success or true, 1 false or refuted,
// 2 input error, 3 resource cap.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace ratkit
