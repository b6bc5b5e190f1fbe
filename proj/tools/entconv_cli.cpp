#include "cli_app.hpp"

int main(int argc, char **argv) { return entconv::cli::run(argc, argv); }
