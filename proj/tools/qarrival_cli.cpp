#include <qarrival/cli.hpp>

int main(int argc, char** argv) { return qarrival::io::cli_main(argc, argv); }
