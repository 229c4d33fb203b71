#include <iostream>

#include "sscd/commands.hpp"

int main(int argc, char** argv) { return sscd::cli::run(argc, argv, std::cout, std::cerr); }
