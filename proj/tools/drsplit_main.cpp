#include "drsplit/cli.hpp"

int main(int argc, char** argv) { return drsplit::cli_main(argc, argv); }
