#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kaczmarz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point for `kaczmarz <subcommand> ...`; `args` excludes the program
/// name. Machine-readable results go to `out`, parameters and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kaczmarz::cli
