#ifndef QSEL_CLI_HPP
#define QSEL_CLI_HPP

#include <string>
#include <vector>

namespace qsel {

// Entry point behind the qsel binary. `args` excludes the program name.
// Exit codes: 0 success, 1 validation or usage problem, 2 I/O problem.
int run_cli(std::vector<std::string> args);

}  // namespace qsel

#endif  // QSEL_CLI_HPP
