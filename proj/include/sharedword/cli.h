#pragma once

// Command-line front end: `sharedword {attack,evaluate,advtrain} ...`.
//
// Exit codes: 0 success, 1 data or input error, 2 configuration or usage
// error, 3 adapter (transport or protocol) failure.

#include <iosfwd>

namespace sharedword {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAdapter = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace sharedword
