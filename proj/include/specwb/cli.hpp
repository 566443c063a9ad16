#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specwb::cli {

// args excludes the program name. Exit codes: 0 success, 1 invalid input,
// 2 computational failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace specwb::cli
