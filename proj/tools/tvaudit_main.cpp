#include <iostream>

#include "tvaudit/cli.hpp"

int main(int argc, char** argv) {
    return tvaudit::run_cli(argc, argv, std::cout, std::cerr);
}
