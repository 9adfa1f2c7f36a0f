#include <iostream>
#include <string>
#include <vector>

#include "enrollcast/cli.hpp"

int main(int argc, char** argv) {
    return enrollcast::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
