#include <iostream>
#include <string>
#include <vector>

#include "verse_eval/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return verse_eval::run_cli(args, std::cout, std::cerr);
}
