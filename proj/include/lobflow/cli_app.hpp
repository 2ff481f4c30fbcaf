#pragma once

namespace lobflow {

// Exit codes: 0 success, 2 usage/parse, 3 validation, 4 compute, 5 I/O.
int run_cli(int argc, char** argv);

}  // namespace lobflow
