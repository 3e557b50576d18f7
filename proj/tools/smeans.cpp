#include "smeans/cli.hpp"

int main(int argc, char** argv) { return smeans::cli_main(argc, argv); }
