#include "dgot/commands.hpp"

int main(int argc, char** argv) { return dgot::run_cli(argc, argv); }
