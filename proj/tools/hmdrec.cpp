#include "hmdrec/harness/cli.hpp"

int main(int argc, char** argv) { return hmdrec::harness::run_cli(argc, argv); }
