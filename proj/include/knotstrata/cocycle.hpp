#pragma once

// Evaluation of the order-3 cohomology classes: the triple/tangency cocycle
// on loops of long knots, the compact classes A/B/C/D on families of compact
// knots, and the direct combinatorial count of the degree-3 class on a single
// compact curve.

#include <map>
#include <string>
#include <vector>

#include "knotstrata/curve.hpp"
#include "knotstrata/cycle.hpp"
#include "knotstrata/strata.hpp"

namespace knotstrata {

struct EvalResult {
  std::string family;  // short description of the evaluated family
  std::vector<Event> events;
  std::map<std::string, int> stratum_mod2;
  std::map<std::string, long long> stratum_signed;
  int total_mod2 = 0;
  long long total_signed = 0;
  RunConfig config;
};

// Triple-point / tangency cocycle on loops of long knots in R^3.
// Route 1: frame tracking with per-frame crossing detection; every event is
// polished against the full stratum system.
EvalResult evaluate_tt(const KnotCycle& cycle, const RunConfig& cfg = {});
// Route 2: blind square solves over seed grids, no frame tracking.
EvalResult evaluate_tt_blind(const KnotCycle& cycle, const RunConfig& cfg = {});

// Compact classes on families of compact knots; cls in {"A","B","C","D"}.
EvalResult evaluate_compact(const KnotCycle& cycle, const std::string& cls,
                            const RunConfig& cfg = {});

// Degree-3 class of compact knots in R^3, counted directly from interleaved
// crossing pairs of the projection (no root finding): signed sum over pairs
// whose four visits interleave cyclically with the later visit of the first
// crossing on top and the earlier visit of the second crossing on top.
long long evaluate_d3_direct(const ParamCurve& curve,
                             const CrossingOptions& opts = {});

// Equation/unknown bookkeeping for every shipped membership system at
// ambient dimension n, for the squareness property test.
struct SystemShape {
  std::string name;
  int equations = 0;
  int unknowns = 0;  // configuration points + family dimension k
};
std::vector<SystemShape> shipped_system_shapes(int n);

}  // namespace knotstrata
