#ifndef KNOWHOW_CLI_HPP
#define KNOWHOW_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace knowhow::cli {

/// Exit statuses shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;  // False verdict, failing line, violations
inline constexpr int kUsage = 2;     // bad flags, unreadable or malformed input

/// Runs one subcommand. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace knowhow::cli

#endif  // KNOWHOW_CLI_HPP
