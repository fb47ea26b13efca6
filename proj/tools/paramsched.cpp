#include "paramsched/cli.hpp"

int main(int argc, char** argv) { return paramsched::cli::run(argc, argv); }
