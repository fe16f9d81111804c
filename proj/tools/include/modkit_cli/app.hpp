#pragma once

#include <string>
#include <vector>

namespace modkit::cli {

struct RunResult {
    std::string out;
    std::string err;
    int status = 0;
};

/// Full command line without the program name; what `modkit` prints and returns.
RunResult run_cli(const std::vector<std::string>& argv);

}  // namespace modkit::cli
