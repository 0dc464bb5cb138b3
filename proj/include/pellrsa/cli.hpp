#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pellrsa::cli {

/// Exit codes of `dispatch`.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;   // malformed flags
inline constexpr int kIoError = 2;      // unreadable file or bad file contents
inline constexpr int kDomainError = 3;  // the operation itself failed

/// Runs one subcommand. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pellrsa::cli
