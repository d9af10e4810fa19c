#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace molgen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitProvider = 4;
inline constexpr int kExitDiverged = 5;

// Entry point behind the molgen executable. args excludes the program name.
// Subcommands: prepare, run-llm, train, evaluate, generate, ablate. Settings
// come from --config FILE, then from --<key> VALUE overrides.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace molgen::cli
