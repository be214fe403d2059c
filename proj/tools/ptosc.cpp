#include "ptosc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ptosc::cli::run(argc, argv, std::cout, std::cerr); }
