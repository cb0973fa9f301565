#include <iostream>

#include "shortsum/cli.hpp"

int main(int argc, char** argv) { return shortsum::cli_main(argc, argv, std::cout, std::cerr); }
