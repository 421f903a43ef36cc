#include <iostream>

#include "qfs/cli/commands.hpp"

int main(int argc, char** argv) { return qfs::cli::run(argc, argv, std::cout, std::cerr); }
