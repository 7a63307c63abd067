#include "qa/cli.hpp"

int main(int argc, char** argv) { return qa::cli::main(argc, argv); }
