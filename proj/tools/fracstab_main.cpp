#include <vector>

#include "fracstab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fracstab::run(args);
}
