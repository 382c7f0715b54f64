#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cpb::cli {

// Process exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;      // bad flags or invalid parameters
inline constexpr int kNumerical = 3;  // convergence or truncation failure
inline constexpr int kIO = 4;         // output sink could not be written

/// Parses `args` (without the program name), runs one subcommand and writes
/// the document to `out` or to --output. Diagnostics go to `err` as a single
/// line. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpb::cli
