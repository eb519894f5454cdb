#include "spikeworks/runtime/cli.hpp"

int main(int argc, char** argv) { return spikeworks::runtime::cli_main(argc, argv); }
