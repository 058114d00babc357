#include "storalyze/cli.hpp"

int main(int argc, char** argv) { return storalyze::cli::run_command(argc, argv); }
