#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ctxlab/povm.hpp"

namespace ctxlab::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kInvariantViolation = 3, kNumericFailure = 4 };

/// Runs `ctxlab` with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Graphviz rendering: outcome labels are node IDs, edges carry `witness`.
std::string to_dot(const ContextGraph &graph);

} // namespace ctxlab::cli
