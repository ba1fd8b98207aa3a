#include <iostream>
#include <string>
#include <vector>

#include "dsheat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dsheat::parse_and_dispatch(args, std::cout, std::cerr);
}
