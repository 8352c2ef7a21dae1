#include <iostream>

#include "inputsafe/cli.hpp"

int main(int argc, char** argv) { return inputsafe::run_cli(argc, argv, std::cout, std::cerr); }
