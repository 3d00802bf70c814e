#pragma once

#include <string>
#include <vector>

namespace lvg::cli {

// Runs one CLI invocation; args excludes the program name.
// Returns 0 on success, 1 on data errors, 2 on internal contract violations.
int run(const std::vector<std::string>& args);

} // namespace lvg::cli
