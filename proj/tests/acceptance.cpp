#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>

#include "checks/criteria.hpp"

// One PASS/FAIL line per criterion. The exit status reports crashes only, so
// an unattained criterion shows as FAIL without failing the test run.
// Usage: acceptance [id ...]
int main(int argc, char** argv) {
  using namespace surflab::checks;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int passed = 0, run = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && !only.count(c.id)) continue;
    const CriterionResult r = run_criterion(c);
    ++run;
    passed += r.passed;
    std::printf("%s %2d %s: %s [%.1f s]\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                r.seconds);
    for (const std::string& s : r.info) std::printf("     info: %s\n", s.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", passed, run);
  return 0;
}
