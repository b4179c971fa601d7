#include <iostream>

#include "simfix/cli.hpp"

int main(int argc, char** argv) {
    return simfix::run_cli(argc, argv, std::cout, std::cerr);
}
