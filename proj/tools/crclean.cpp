#include "crclean/cli.hpp"

int main(int argc, char** argv) { return crclean::run_cli(argc, argv); }
