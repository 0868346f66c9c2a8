#include "wg/cli.hpp"

int main(int argc, char** argv) { return wg::cli::run(argc, argv); }
