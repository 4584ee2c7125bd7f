#pragma once

#include <iosfwd>

namespace glscov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;

// Entry point of the glscov binary. Reports go to `out` (or to --out), usage
// text and parse errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glscov::cli
