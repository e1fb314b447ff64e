#include "cli.hpp"

int main(int argc, char** argv)
{
    return tanpq::cli::main_entry(argc, argv);
}
