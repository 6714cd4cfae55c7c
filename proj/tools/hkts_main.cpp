#include <iostream>
#include <string>
#include <vector>

#include "hkts/commands.hpp"

int main(int argc, char** argv) {
    return hkts::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
