#include "qsel/cli.hpp"

int main(int argc, char** argv) {
    return qsel::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
