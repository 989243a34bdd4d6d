#include <aagg/cli.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  aagg::cli::CommandLine cmd = aagg::cli::parseCommandLine(args, std::cout, std::cerr);
  if (!cmd.config) return cmd.exitCode;
  return aagg::cli::run(*cmd.config, std::cin, std::cout, std::cerr);
}
