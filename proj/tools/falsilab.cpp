#include <iostream>

#include "falsilab/cli.hpp"

int main(int argc, char** argv) { return falsilab::run(argc, argv, std::cout, std::cerr); }
