#include <iostream>

#include "ook_bcc/cli.hpp"

int main(int argc, char** argv) { return ook_bcc::run_command(argc, argv, std::cout, std::cerr); }
