// Acceptance gate: runs every verification check once and prints one
// PASS/FAIL line per check. Exits nonzero if any check fails.

#include <cstdio>

#include "stnabla/verify.hpp"

int main() {
  auto results = stnabla::run_acceptance();
  int failed = 0;
  int index = 0;
  for (const auto& r : results) {
    ++index;
    if (!r.pass) ++failed;
    std::printf("%s %2d/%zu %-28s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", index, results.size(),
                r.name.c_str(), r.seconds, r.detail.c_str());
  }
  if (failed > 0) {
    std::printf("%d of %zu checks failed\n", failed, results.size());
    return 1;
  }
  std::printf("all %zu checks passed\n", results.size());
  return 0;
}
