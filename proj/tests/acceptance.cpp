// Usage: hyperem_acceptance [--out DIR] [criterion ...]
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "hyperem/acceptance.hpp"

int main(int argc, char** argv) {
  hyperem::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      opt.out_dir = argv[++i];
    } else {
      opt.criteria.push_back(std::atoi(a.c_str()));
    }
  }
  bool all = true;
  try {
    for (const auto& r : hyperem::run_acceptance(opt)) {
      std::printf("%s\n", hyperem::format_result(r).c_str());
      std::fflush(stdout);
      all &= r.pass;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return all ? 0 : 1;
}
