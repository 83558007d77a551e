#include <iostream>
#include <string>
#include <vector>

#include "mshit/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return mshit::cli::run(args, std::cerr);
}
