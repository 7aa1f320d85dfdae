#include <iostream>

#include "kvstring_cli/cli.hpp"

int main(int argc, char** argv) { return kvstring::cli::run(argc, argv, std::cout, std::cerr); }
