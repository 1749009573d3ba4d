// qzeno.cpp — Command-line entry point

#include <iostream>

#include "qzeno/cli.hpp"

int main(int argc, char** argv) {
    return qzeno::cli::run(argc, argv, std::cout, std::cerr);
}
