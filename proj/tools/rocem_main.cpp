#include "rocem/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return rocem::run_cli(argc, argv, std::cout, std::cerr);
}
