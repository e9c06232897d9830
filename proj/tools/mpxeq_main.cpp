#include <iostream>

#include "mpxeq/cli.hpp"

int main(int argc, char** argv) {
    return mpxeq::run_cli(argc, argv, std::cout, std::cerr);
}
