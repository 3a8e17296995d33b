#include <iostream>

#include "qtherm/cli.hpp"

int main(int argc, char **argv) { return qtherm::cli::run(argc, argv, std::cout, std::cerr); }
