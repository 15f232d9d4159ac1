#include <iostream>

#include "finord/cli.hpp"

int main(int argc, char** argv) { return finord::run_cli(argc, argv, std::cout, std::cerr); }
