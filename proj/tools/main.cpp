#include "torusdirac/cli.hpp"

int main(int argc, char** argv) { return torusdirac::cli::run(argc, argv); }
