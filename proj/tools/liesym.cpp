#include "liesym/cli.hpp"

int main(int argc, char** argv) { return liesym::cli::run(argc, argv); }
