#include "vvs/cli.hpp"

int main(int argc, char** argv) { return vvs::cli::run(argc, argv); }
