#include "sorptran/cli.hpp"

int main(int argc, char** argv) { return sorptran::cli_main(argc, argv); }
