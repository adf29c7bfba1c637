#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace popcorn::cli {

enum ExitCode : int { ok = 0, counterexample = 1, usage = 2, resource = 3 };

struct RunConfig {
    std::string t = "1";
    int d = 2;
    std::string variant = "graph";
    std::optional<int> j_min;
    std::optional<int> j_max;
    std::optional<std::string> theta;
    std::optional<std::string> epsilon;
    std::optional<std::string> t1;
    std::optional<std::string> t2;
    std::optional<std::string> format;
    std::string out;
    std::uint64_t seed = 1;
    std::uint64_t max_points = 1'000'000'000;
    std::string target;
    std::string suite;
    std::string input;
};

/// Parses argv and runs one subcommand. Results go to `out` (or to --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace popcorn::cli
