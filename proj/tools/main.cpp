#include <string>
#include <vector>

#include "dslit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dslit::cli::run(args);
}
