#pragma once

#include <string>
#include <vector>

namespace gielab::cli {

/// Exit codes: 0 success, 1 failed suite criteria, 2 configuration/schema
/// errors, 3 numerical contract violations.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace gielab::cli
