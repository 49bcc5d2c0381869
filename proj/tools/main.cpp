#include "chd/cli.hpp"

int main(int argc, char** argv) { return chd::cli::dispatch(argc, argv); }
