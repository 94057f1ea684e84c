#include <iostream>

#include "gentrans/cli/commands.hpp"

int main(int argc, char** argv) {
    return gentrans::cli::run_cli(argc, argv, std::cout, std::cerr);
}
