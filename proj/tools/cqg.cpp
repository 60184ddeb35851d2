#include <iostream>
#include <string>
#include <vector>

#include "cqg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cqg::dispatch(std::move(args), std::cout, std::cerr);
}
