#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deepcoda::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // bad arguments or invalid data
inline constexpr int kExitNumeric = 3;  // training divergence or other numeric failure

// Runs the `deepcoda` command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deepcoda::cli
