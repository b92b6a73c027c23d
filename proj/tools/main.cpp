#include "roughhj/cli.hpp"

int main(int argc, char** argv) { return roughhj::cli_main(argc, argv); }
