#include <iostream>

#include "gspde/cli.hpp"

int main(int argc, char** argv) { return gspde::cli::run(argc, argv, std::cout, std::cerr); }
