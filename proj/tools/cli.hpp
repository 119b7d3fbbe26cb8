#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdcoach::cli {

// Exit codes: 0 success, 1 domain violation (invalid diagram, degenerate
// statistics), 2 I/O or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitIo = 2;

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Stops a running `serve` command; safe to call from another thread.
void stopServing();

/// Port of the running `serve` command, or -1.
int servingPort();

}  // namespace cdcoach::cli
