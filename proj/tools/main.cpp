#include "cli.hpp"

int main(int argc, char** argv) { return ffharm::run_cli(argc, argv); }
