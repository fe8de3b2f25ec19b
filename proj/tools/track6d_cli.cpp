#include <string>
#include <vector>

#include "track6d/cli/cli.hpp"

int main(int argc, char** argv) {
  return track6d::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
