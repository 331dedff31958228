#include "dsp/cli.hpp"

int main(int argc, char** argv) { return dsp::cli::run(argc, argv); }
