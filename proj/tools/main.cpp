#include <iostream>

#include "ropm/cli.hpp"

int main(int argc, char** argv) { return ropm::cli::dispatch(argc, argv, std::cout, std::cerr); }
