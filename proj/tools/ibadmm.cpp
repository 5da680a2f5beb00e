#include "ibadmm/cli.hpp"

int main(int argc, char** argv) { return ibadmm::cli_main(argc, argv); }
