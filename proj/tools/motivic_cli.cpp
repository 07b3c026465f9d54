#include <iostream>

#include <motivic/cli.hpp>

int main(int argc, char **argv) { return motivic::cli::run(argc, argv, std::cout, std::cerr); }
