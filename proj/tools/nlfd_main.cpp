#include <iostream>

#include "nlfd/cli.hpp"

int main(int argc, char** argv) { return nlfd::cli::run(argc, argv, std::cout, std::cerr); }
