#include "rcsurf/cli.hpp"

int main(int argc, char** argv) { return rcsurf::run_cli(argc, argv); }
