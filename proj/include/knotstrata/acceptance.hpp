#pragma once

// The release gate: seven end-to-end checks with pinned tolerances, shared by
// the acceptance test binary and the CLI `selftest` verb.  Each criterion
// prints exactly one pass/fail line.

#include <iosfwd>
#include <string>
#include <vector>

#include "knotstrata/strata.hpp"

namespace knotstrata {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs all seven criteria, streaming one line per criterion to `out`.
// Returns the per-criterion results (size 7).
std::vector<CriterionResult> run_acceptance(std::ostream& out,
                                            const RunConfig& cfg = {});

}  // namespace knotstrata
