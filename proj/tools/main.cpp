#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return fo::cli::run(argc, argv, std::cout, std::cerr); }
