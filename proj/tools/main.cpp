#include "inertid_cli.hpp"

int main(int argc, char** argv) { return inertid::cli::run(argc, argv, std::cout, std::cerr); }
