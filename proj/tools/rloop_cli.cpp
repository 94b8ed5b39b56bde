#include <iostream>
#include <vector>

#include "rloop/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rloop::run_command(args, std::cout, std::cerr);
}
