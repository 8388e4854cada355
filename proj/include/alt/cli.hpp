#pragma once

#include <string>
#include <vector>

namespace alt {

// Entry point shared by the binary and the tests. `args` excludes the
// program name. Returns the process exit code: 0 iff the requested report
// was produced; errors go to stderr as one JSON object
// {"error": {"category": ..., "message": ...}}.
int cli_main(const std::vector<std::string>& args);

} // namespace alt
