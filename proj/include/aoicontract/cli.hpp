#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace aoicontract::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one command. `args` excludes the program name. Diagnostics go to
/// `err`, short progress lines to `out`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace aoicontract::cli
