#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdmacap {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Release-gate checks behind `validate` and the acceptance test binary.
// `only` = 0 runs all criteria in order; a criterion number runs just that
// one.  One [PASS]/[FAIL] line per criterion is printed to `out` as it
// completes.
std::vector<CriterionResult> run_acceptance(std::ostream& out,
                                            int workers = 1, int only = 0);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace cdmacap
