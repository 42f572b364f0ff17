#pragma once

#include <string>
#include <vector>

namespace coevo::vcs {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
};

// Runs argv[0] (looked up on PATH) with stdin closed and stderr discarded,
// capturing stdout. Throws coevo::Error if the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace coevo::vcs
