#include <iostream>

#include "wmm/cli.hpp"

int main(int argc, char** argv) { return wmm::run_cli(argc, argv, std::cout, std::cerr); }
