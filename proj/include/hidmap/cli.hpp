#pragma once

#include <ostream>

namespace hidmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitBadFlags = 3;
inline constexpr int kExitPortInUse = 4;

inline constexpr int kDefaultPort = 8080;

// Entry point shared by the binary and the tests. `serve` blocks until
// SIGINT/SIGTERM.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hidmap::cli
