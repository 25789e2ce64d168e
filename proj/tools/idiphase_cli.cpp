#include <iostream>

#include "idi/commands.hpp"

int main(int argc, char** argv) { return idi::run_cli(argc, argv, std::cout, std::cerr); }
