#include <iostream>

#include "qrel/cli.hpp"

int main(int argc, char **argv) { return qrel::cli_main(argc, argv, std::cout, std::cerr); }
