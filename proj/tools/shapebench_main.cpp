#include "shapebench/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return shapebench::cli::run(argc, argv, std::cout, std::cerr);
}
