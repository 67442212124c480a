#include "pgcl/cli.hpp"

int main(int argc, char** argv) { return pgcl::run_cli(argc, argv); }
