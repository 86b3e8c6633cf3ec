#include <iostream>

#include "wwlab/cli.hpp"

int main(int argc, char** argv) { return ww::run_cli(argc, argv, std::cout, std::cerr); }
