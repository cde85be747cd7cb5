#include "momix/cli.hpp"

int main(int argc, char** argv) {
  return momix::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
