#include <string>
#include <vector>

#include "alt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return alt::cli_main(args);
}
