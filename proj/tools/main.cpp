#include <iostream>
#include <string>
#include <vector>

#include "bicont/cli.hpp"

int main(int argc, char** argv) {
    return bicont::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
