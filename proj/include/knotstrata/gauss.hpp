#pragma once

// Knot diagram codes (signed Gauss sequences), projection of space curves to
// codes, and arrow-pattern invariant formulas evaluated on them with exact
// rational arithmetic.

#include <boost/rational.hpp>
#include <string>
#include <utility>
#include <vector>

#include "knotstrata/curve.hpp"

namespace knotstrata {

using Rational = boost::rational<long long>;

// A knot diagram code: a sequence of crossing visits in parameter order.
// Long diagrams read left to right; compact diagrams are cyclic with the
// basepoint between the last and first visit.
struct KnotDiagram {
  struct Visit {
    int crossing = 0;  // 0-based crossing id
    bool over = false;
  };

  CurveKind kind = CurveKind::kCompact;
  std::vector<Visit> visits;
  std::vector<int> signs;  // per crossing: +1 or -1

  int crossing_count() const { return static_cast<int>(signs.size()); }

  // Parse whitespace-separated tokens like "O1+ U2- O3+ ...".  Labels are
  // arbitrary positive integers; they are renumbered by first appearance.
  static KnotDiagram parse(const std::string& text,
                           CurveKind kind = CurveKind::kCompact);
  std::string to_string() const;
  void validate() const;  // throws InputError on malformed codes

  bool alternating() const;
  int writhe() const;

  // Insert a curl (first Reidemeister move): a new crossing visited twice in
  // a row at the given visit position.
  KnotDiagram with_kink(int position, int sign, bool over_first) const;
};

// Project a 3-space curve to its diagram code.  Crossing signs follow the
// standard convention sign = det(over tangent, under tangent) in the plane.
KnotDiagram project_to_diagram(const ParamCurve& curve,
                               const CrossingOptions& opts = {});

// --- arrow-pattern formulas -------------------------------------------------

// A weighted sum of arrow patterns.  Each pattern has 2k endpoint slots on a
// line (based formulas) or circle (absolute formulas) and k arrows between
// them; an arrow tail sits on the under-strand visit of a crossing and its
// head on the over-strand visit.
struct ArrowPattern {
  int points = 0;                           // number of slots (= 2 * arrows)
  std::vector<std::pair<int, int>> arrows;  // (tail slot, head slot), 1-based
  void validate() const;
};

struct ArrowTerm {
  Rational coeff;
  ArrowPattern pattern;
};

struct ArrowFormula {
  std::string name;
  CurveKind domain = CurveKind::kLong;  // long: based count; compact: absolute
  std::vector<ArrowTerm> terms;

  // Grammar: term ('+'|'-') term ...; term = [coeff '*'] 'D[' arrows ']';
  // coeff = integer or integer '/' integer; arrows = 'i>j' comma-separated.
  static ArrowFormula parse(const std::string& text, const std::string& name,
                            CurveKind domain);
  std::string to_string() const;
};

ArrowFormula formula_v2();
ArrowFormula formula_v3();
std::vector<std::string> formula_names();
ArrowFormula formula_by_name(const std::string& name);

// Evaluate a formula on a diagram.  Based formulas on compact diagrams cut
// the cycle at the basepoint; absolute formulas on long diagrams are an
// input error.  Each matched pattern contributes the product of the signs of
// the crossings it uses.
Rational evaluate_formula(const ArrowFormula& formula, const KnotDiagram& dia);

}  // namespace knotstrata
