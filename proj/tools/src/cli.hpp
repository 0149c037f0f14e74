#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oup::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Machine
/// output that is not sent to a file goes to `out`; human summaries go to
/// `out` as well unless `out` already carries machine output, in which case
/// they go to `err` together with error lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oup::cli
