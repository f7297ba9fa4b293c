#include <cstdio>

#include "axicd/verification.hpp"

int main() {
  bool all = true;
  axicd::run_acceptance_suite([&](const axicd::CriterionResult& r) {
    all = all && r.passed;
    std::printf("criterion %2d %s: %s | %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("%s\n", all ? "all acceptance criteria passed" : "some acceptance criteria failed");
  return all ? 0 : 1;
}
