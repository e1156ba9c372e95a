#include "cli.hpp"

int main(int argc, char** argv) { return inkwarp::cli::run(argc, argv); }
