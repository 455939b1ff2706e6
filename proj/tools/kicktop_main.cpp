#include "kicktop/cli_io.hpp"

int main(int argc, char** argv) { return kicktop::run_cli(argc, argv); }
