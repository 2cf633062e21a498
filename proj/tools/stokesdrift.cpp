#include "stokesdrift/cli.hpp"

int main(int argc, char** argv) { return stokesdrift::cli::run_cli(argc, argv); }
