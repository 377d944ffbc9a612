#include <iostream>
#include <string>
#include <vector>

#include "ompadvisor/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ompadvisor::run_cli(args, std::cout, std::cerr);
}
