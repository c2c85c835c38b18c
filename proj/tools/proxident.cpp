#include "proxident/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    return proxident::cli::main_entry(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
