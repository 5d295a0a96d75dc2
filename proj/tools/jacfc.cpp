#include <iostream>
#include <string>
#include <vector>

#include "jacfc/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return jacfc::cli::run(args, std::cout, std::cerr);
}
