#pragma once
// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bpx/intset.hpp"

namespace bpx::cli {

struct RunConfig {
    Index horizon = Index{1} << 14;
    std::vector<Index> schedule;  // empty: 2^4 .. 2^(log2 H - 2)
    std::vector<Index> grid{1, 2, 4, 8};
    double lambda = 0.99;
    double theta = 0.01;
    std::uint64_t seed = 1;
    std::string format = "json-lines";
};

enum ExitCode : int { ok = 0, verdict_fail = 1, usage_error = 2, resource_limit = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpx::cli
