#include "glyphgrow/cli.hpp"

int main(int argc, char** argv) { return glyphgrow::cli::cli_main(argc, argv); }
