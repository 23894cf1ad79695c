#include "imrec/cli.hpp"

int main(int argc, char** argv) { return imrec::run_cli(argc, argv); }
