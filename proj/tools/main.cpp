#include "cli.hpp"

int main(int argc, char** argv) { return csuq::cli::main(argc, argv); }
