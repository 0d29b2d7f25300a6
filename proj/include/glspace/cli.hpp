#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glspace {

// Exit codes of run_command.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

// argv without the program name. Results go to out (or --out), diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glspace
