#include <iostream>

#include "fbmsde/cli.hpp"

int main(int argc, char** argv) { return fbmsde::cli::run(argc, argv, std::cout, std::cerr); }
