#include "subpois/cli.hpp"

int main(int argc, char** argv) { return subpois::cli::run(argc, argv); }
