#include <string>
#include <vector>

#include "bloch/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return bloch::run_cli(args);
}
