#include "xopt/cli.hpp"

int main(int argc, char** argv) { return xopt::cli::main(argc, argv); }
