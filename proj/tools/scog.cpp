#include "scog/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return scog::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
