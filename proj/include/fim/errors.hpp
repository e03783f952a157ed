#pragma once

#include <stdexcept>
#include <string>

namespace fim {

// Exit codes used by the CLI; library errors map onto these.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSizeGuard = 4;

// Bad configuration: invalid coefficients, budgets, flags, config files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or unavailable input data: malformed edge lists, failed downloads,
// checksum mismatches.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem instance too large for an exhaustive computation.
struct SizeGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fim
