#include "auvplan/cli.hpp"

int main(int argc, char** argv) { return auvplan::cli::run(argc, argv); }
