#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steerfiber {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Runs the CLI with args (excluding the program name). JSON and CSV results
// go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steerfiber
