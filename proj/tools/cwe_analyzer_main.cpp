#include <iostream>

#include "cwe_analyzer/cli.hpp"

int main(int argc, char** argv) { return cwe_analyzer::run_cli(argc, argv, std::cout, std::cerr); }
