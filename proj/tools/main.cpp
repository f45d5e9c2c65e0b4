#include "fblnoma/cli.hpp"

int main(int argc, char** argv) {
  return fblnoma::cli::run(argc, argv);
}
