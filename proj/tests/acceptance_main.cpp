#include <cstdio>

#include "tbc/verify.hpp"

int main() {
  int failed = 0;
  for (int id = 1; id <= tbc::kAcceptanceCount; ++id) {
    const tbc::CheckResult r = tbc::run_check(id);
    std::printf("%s\n", r.summary().c_str());
    std::fflush(stdout);
    if (!r.passed()) ++failed;
  }
  std::printf("%d of %d acceptance criteria passed\n", tbc::kAcceptanceCount - failed, tbc::kAcceptanceCount);
  return failed == 0 ? 0 : 1;
}
