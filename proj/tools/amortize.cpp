#include "amortize/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return amortize::cli_main(argc, argv, std::cout, std::cerr);
}
