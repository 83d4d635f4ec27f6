#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "envylab/oracle.hpp"

namespace envylab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Test seam: lets the verify subcommand run against a substitute DA.
struct Hooks {
    DaFunction deferred_acceptance;
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

}  // namespace envylab::cli
