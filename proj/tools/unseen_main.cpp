#include <iostream>

#include "unseen/cli.hpp"

int main(int argc, char** argv) { return unseen::run_cli(argc, argv, std::cout, std::cerr); }
