#include <iostream>

#include "manitomo/cli.hpp"

int main(int argc, char** argv) { return manitomo::cli::run(argc, argv, std::cout, std::cerr); }
