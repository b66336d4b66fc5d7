#include <iostream>

#include "fairprice/cli.hpp"

int main(int argc, char** argv) { return fairprice::cli::run_cli(argc, argv, std::cout, std::cerr); }
