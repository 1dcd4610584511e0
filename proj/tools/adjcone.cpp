#include "adjcone/cli.hpp"

int main(int argc, char** argv) { return adjcone::cli::run(argc, argv); }
