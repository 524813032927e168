#include <iostream>

#include "ktf/cli.hpp"

int main(int argc, char** argv) { return ktf::dispatch(argc, argv, std::cout, std::cerr); }
