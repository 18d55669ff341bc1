#include "freeconv/cli.hpp"

int main(int argc, char** argv) { return freeconv::cli::main(argc, argv); }
