#include "clpqr/cli.hpp"

int main(int argc, char** argv) { return clpqr::run_cli(argc, argv); }
