#include "btfcli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return btfcli::run_cli(argc, argv, std::cout, std::cerr); }
