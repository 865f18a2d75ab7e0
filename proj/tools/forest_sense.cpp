#include "forest_sense/cli.hpp"

int main(int argc, char** argv) { return forest_sense::cli::main_entry(argc, argv); }
