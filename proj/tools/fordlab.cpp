#include "fordlab/cli.hpp"

int main(int argc, char** argv) { return fordlab::run_cli(argc, argv); }
