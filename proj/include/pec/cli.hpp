#pragma once

#include <string>
#include <vector>

namespace pec {

// Full command-line driver; args excludes the program name. Returns the
// process exit code: 0 success, 2 configuration or usage errors, 3
// infeasible or empty problem instances, 1 anything else.
int run_cli(const std::vector<std::string>& args);

} // namespace pec
