#include "cli.hpp"

int main(int argc, char** argv) { return torus_lqg::cli::run_subcommand(argc, argv); }
