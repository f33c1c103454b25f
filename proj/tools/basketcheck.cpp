#include "basketcheck/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return basketcheck::run_cli(argc, argv, std::cout, std::cerr);
}
