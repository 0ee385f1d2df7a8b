#include <iostream>

#include "al/cli/commands.hpp"

int main(int argc, char** argv) {
    return al::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
