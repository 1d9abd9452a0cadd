#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace busod::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Runs one command line. args[0] is the program name. Data goes to `out`,
// diagnostics to `err`.
int run(std::vector<std::string> const& args, std::ostream& out,
        std::ostream& err);

}  // namespace busod::cli
