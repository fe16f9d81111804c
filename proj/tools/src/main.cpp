#include <iostream>
#include <string>
#include <vector>

#include "modkit_cli/app.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto r = modkit::cli::run_cli(args);
    std::cout << r.out;
    std::cerr << r.err;
    return r.status;
}
