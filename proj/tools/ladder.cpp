#include <iostream>

#include "ladder/app/commands.hpp"

int main(int argc, char** argv) { return ladder::app::run_cli(argc, argv, std::cout, std::cerr); }
