#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace falsilab {

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // negative verdict with --fail-on-refuted
inline constexpr int kExitUsage = 2;     // usage, parse and input errors
inline constexpr int kExitBudget = 3;    // budget, cap and size limits

// Runs one falsilab command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Default corpus directory baked in at build time.
std::string default_corpus_dir();

}  // namespace falsilab
