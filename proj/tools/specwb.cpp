#include "specwb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return specwb::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
