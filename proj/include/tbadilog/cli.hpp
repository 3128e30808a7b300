#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tbadilog {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Default tolerance for recognize and search; overridden by TBADILOG_TOLERANCE.
inline constexpr double kDefaultTolerance = 1e-9;

std::string version_string();

/// Runs one subcommand. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on a computation failure and
/// 2 on malformed input.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tbadilog
