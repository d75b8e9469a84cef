#include <iostream>

#include "etr/cli.hpp"

int main(int argc, char** argv) { return etr::cli::run(argc, argv, std::cout, std::cerr); }
