#include <string>
#include <vector>

#include "rgg/harness.hpp"

int main(int argc, char** argv) {
    return rgg::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
