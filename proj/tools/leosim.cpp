#include <iostream>

#include "leosim/cli.hpp"

int main(int argc, char** argv) { return leosim::run_cli({argv + 1, argv + argc}, std::cout, std::cerr); }
