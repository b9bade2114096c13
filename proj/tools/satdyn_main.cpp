#include "satdyn/cli.hpp"

int main(int argc, char** argv) { return satdyn::cli::run_cli(argc, argv); }
