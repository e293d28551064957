#pragma once

#include <iosfwd>

namespace hmcf::cli {

/// Entry point of the hmcf tool. Exit codes: 0 success (singular and extinct
/// flows included), 1 numerical or I/O failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace hmcf::cli
