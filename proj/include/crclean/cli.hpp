#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crclean {

/// Runs one crclean invocation in-process. `args` excludes the program
/// name. Returns the process exit status: 0 on success, 1 on a runtime
/// error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace crclean
