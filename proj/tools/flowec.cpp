#include "flowec/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return flowec::cli::run(argc, argv, std::cout, std::cerr);
}
