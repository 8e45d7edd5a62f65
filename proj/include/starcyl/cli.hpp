#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace starcyl {

// Command-line entry point, factored out of main() so tests can drive it
// in-process. Returns the process exit code: 0 success, 2 parse error,
// 3 semantic error, 4 budget exceeded, 5 oracle mismatch.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace starcyl
