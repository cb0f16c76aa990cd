// Cross-validation suites wiring the independent routes against each other:
// series vs brute-force enumeration, closed-form saddle vs Newton, analytic
// derivatives vs finite differences, asymptote vs lattice sums, exact law vs
// rejection sampling. Surfaced through the `verify` CLI subcommand.

#ifndef CONDIFF_SELFTEST_HPP
#define CONDIFF_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace condiff {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// suite: "exact", "asympt", "laplace", "montecarlo" or "all".
// Randomized checks derive their draws from `seed` deterministically.
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed);

}  // namespace condiff

#endif
