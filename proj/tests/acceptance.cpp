// Acceptance gate: runs the full self-test battery with default settings and
// prints one pass/fail line per criterion.  Exits nonzero if any criterion
// fails.  This is the same battery exposed by `triplekit selftest`.

#include <cstdio>
#include <iostream>

#include "triplekit/selftest.hpp"

int main() {
  triplekit::RunConfig cfg;  // pinned defaults: seed 0, abs/rel 1e-9
  auto results = triplekit::run_acceptance_suites(cfg);
  triplekit::print_suite_results(std::cout, results);
  const bool ok = triplekit::all_ok(results);
  std::printf("%s\n", ok ? "ACCEPTANCE: all criteria passed"
                         : "ACCEPTANCE: FAILURES PRESENT");
  return ok ? 0 : 1;
}
