#include "lobflow/cli_app.hpp"

int main(int argc, char** argv) { return lobflow::run_cli(argc, argv); }
