#include <iostream>

#include "fkpp_tools/commands.hpp"

int main(int argc, char** argv) { return fkpp::cli::run(argc, argv, std::cout, std::cerr); }
