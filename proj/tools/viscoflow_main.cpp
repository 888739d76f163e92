#include <iostream>

#include "viscoflow/cli.hpp"

int main(int argc, char** argv) { return viscoflow::run_cli(argc, argv, std::cout, std::cerr); }
