#include <iostream>

#include "georel/relcli.hpp"

int main(int argc, char** argv) { return georel::cli::run(argc, argv, std::cout, std::cerr); }
