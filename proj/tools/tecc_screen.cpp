#include "tecc/cli.hpp"

int main(int argc, char** argv) { return tecc::run_cli(argc, argv); }
