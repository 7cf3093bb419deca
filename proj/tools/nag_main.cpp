#include "nag/cli.hpp"

int main(int argc, char** argv) { return nag::cli::run(argc, argv); }
