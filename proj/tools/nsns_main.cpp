#include <vector>

#include "nsns/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nsns::run_cli(args);
}
