#include "trapwalk/cli/runner.hpp"

int main(int argc, char** argv) { return trapwalk::cli::main_entry(argc, argv); }
