#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thermoforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitIo = 74;

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace thermoforge::cli
