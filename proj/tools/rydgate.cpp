#include "rydgate/cli.hpp"

int main(int argc, char** argv) { return rydgate::cli::main(argc, argv); }
