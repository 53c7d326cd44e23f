#include <iostream>

#include "pathsep/cli.hpp"

int main(int argc, char** argv) { return pathsep::cli::run(argc, argv, std::cout, std::cerr); }
