#include "stratlas/cli.hpp"

int main(int argc, char** argv) { return strat::run_cli(argc, argv); }
