#include "thinring/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return thinring::cli::main_entry(argc, argv, std::cout, std::cerr); }
