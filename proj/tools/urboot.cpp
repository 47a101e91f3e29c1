#include "cli.hpp"

int main(int argc, char** argv) { return urboot::cli::run(argc, argv); }
