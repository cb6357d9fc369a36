#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ouocc::cli {

/// Process exit statuses used by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,         ///< I/O or other runtime failure
    kUsage = 2,           ///< bad flags, bad values or malformed input files
    kPrecisionGuard = 3,  ///< 2 lambda T at or past the supported limit
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Regular output goes to out, diagnostics and warnings to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Inclusive arithmetic sweep "start:stop:step"; the last value is kept when
/// it lies within half a step of stop.
std::vector<double> parse_range(const std::string& text);

}  // namespace ouocc::cli
