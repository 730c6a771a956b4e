#include "aakmin/cli.hpp"

int main(int argc, char** argv)
{
    return aakmin::run_command(argc, argv);
}
