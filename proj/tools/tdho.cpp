#include "tdho/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return tdho::run_cli(argc, argv, std::cout, std::cerr);
}
