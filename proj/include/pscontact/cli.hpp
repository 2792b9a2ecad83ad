#pragma once

#include <string>
#include <vector>

namespace pscontact::cli {

// Entry point behind the binary's main; exposed so the test suites can
// exercise the exact CLI surface in-process. Returns the process exit code:
// 0 all checks pass, 1 any fail or contradiction, 2 input error.
int run(const std::vector<std::string>& args, std::string& out, std::string& err);

int run_main(int argc, char** argv);

} // namespace pscontact::cli
