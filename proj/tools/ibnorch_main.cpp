#include <iostream>
#include <string>
#include <vector>

#include "ibn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ibn::run_cli(args, std::cout, std::cerr);
}
