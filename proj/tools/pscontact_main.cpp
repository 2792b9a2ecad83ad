#include "pscontact/cli.hpp"

int main(int argc, char** argv) { return pscontact::cli::run_main(argc, argv); }
