#include <iostream>

#include "csaug/cli.hpp"

int main(int argc, char** argv) { return csaug::cli::run(argc, argv, std::cout, std::cerr); }
