// Command-line front end, callable in-process for tests.
// Exit codes: 0 success (and certified), 1 runtime error, 2 certificate or
// self-test condition failed, 64 usage error.
#pragma once

#include <string>
#include <vector>

namespace fracstab {

// args mirrors argv, program name included.
int run(const std::vector<std::string>& args);

}  // namespace fracstab
