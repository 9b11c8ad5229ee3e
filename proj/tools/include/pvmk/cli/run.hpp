#pragma once

#include <iosfwd>

namespace pvmk::cli {

/// Exit codes: 0 every verdict passed, 1 a verdict failed, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFail = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pvmk::cli
