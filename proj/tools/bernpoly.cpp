#include <iostream>

#include "bernpoly/cli.hpp"

int main(int argc, char** argv)
{
    return bernpoly::cli::run(argc, argv, std::cout, std::cerr);
}
