#include "weilrad/cli.hpp"

int main(int argc, char** argv) { return weilrad::cli::run(argc, argv); }
