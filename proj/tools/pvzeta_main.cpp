#include "pvzeta/cli.hpp"

int main(int argc, char** argv) { return pvz::cli::run(argc, argv); }
