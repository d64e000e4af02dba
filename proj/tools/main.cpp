#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char **argv) {
  auto ctx = fuzzymatch::cli::CliContext::process();
  return fuzzymatch::cli::run(std::vector<std::string>(argv, argv + argc), ctx);
}
