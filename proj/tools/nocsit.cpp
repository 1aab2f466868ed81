#include "nocsit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return nocsit::cli::run(argc, argv, std::cout, std::cerr);
}
