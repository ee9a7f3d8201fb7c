#include <vector>

#include "rou/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rou::run_cli(args);
}
