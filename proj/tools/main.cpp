#include "surropt/cli.hpp"

int main(int argc, char** argv) { return surropt::cli::cli_main(argc, argv); }
