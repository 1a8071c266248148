#include <iostream>

#include "sepx/cli.hpp"

int main(int argc, char** argv) { return sepx::cli::dispatch(argc, argv, std::cout, std::cerr); }
