#include "rankdyn/cli.hpp"

int main(int argc, char** argv)
{
    return rankdyn::run_cli(argc, argv);
}
