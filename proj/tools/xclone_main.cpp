#include <csignal>
#include <iostream>

#include "xclone/cli/cli.hpp"

namespace {
extern "C" void on_sigint(int) { xclone::cli::interrupt_flag().store(true); }
}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_sigint);
  return xclone::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
