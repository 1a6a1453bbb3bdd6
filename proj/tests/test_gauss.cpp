// Gauss codes and arrow-formula evaluation: frozen invariant values for
// fixture knots, agreement with an independent brute-force matcher, basepoint
// and Reidemeister invariance, and grammar errors.

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "knotstrata/gauss.hpp"
#include "knotstrata/scenarios.hpp"

namespace knotstrata {
namespace {

// --- independent oracle ------------------------------------------------------
//
// Counts weighted pattern matches by enumerating position subsets as
// bitmasks (not by backtracking): for each subset of visit positions of the
// right size, taken in increasing order as the slot assignment, check the
// over/under roles and the arrow-to-crossing consistency.

long long oracle_count_based(const KnotDiagram& dia, const ArrowPattern& pat,
                             bool pin_first) {
  const int nv = static_cast<int>(dia.visits.size());
  const int k = pat.points;
  if (nv < k) return 0;
  // Slot roles: tail = under visit, head = over visit.
  std::vector<int> role_over(k, -1);
  for (const auto& [tail, head] : pat.arrows) {
    role_over[tail - 1] = 0;
    role_over[head - 1] = 1;
  }
  long long total = 0;
  for (unsigned mask = 0; mask < (1u << nv); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    if (pin_first && !(mask & 1u)) continue;
    std::vector<int> pos;
    for (int i = 0; i < nv; ++i)
      if (mask & (1u << i)) pos.push_back(i);
    bool ok = true;
    for (int s = 0; s < k && ok; ++s)
      ok = dia.visits[pos[s]].over == (role_over[s] == 1);
    if (!ok) continue;
    long long weight = 1;
    std::vector<int> used;
    for (const auto& [tail, head] : pat.arrows) {
      const auto& vt = dia.visits[pos[tail - 1]];
      const auto& vh = dia.visits[pos[head - 1]];
      if (vt.crossing != vh.crossing) {
        ok = false;
        break;
      }
      for (int u : used)
        if (u == vt.crossing) ok = false;
      if (!ok) break;
      used.push_back(vt.crossing);
      weight *= dia.signs[vt.crossing];
    }
    if (ok) total += weight;
  }
  return total;
}

KnotDiagram rotate_code(const KnotDiagram& dia, int shift) {
  KnotDiagram out = dia;
  const int nv = static_cast<int>(dia.visits.size());
  for (int i = 0; i < nv; ++i) out.visits[i] = dia.visits[(i + shift) % nv];
  return out;
}

Rational oracle_eval(const ArrowFormula& formula, const KnotDiagram& dia) {
  Rational total(0);
  const int nv = static_cast<int>(dia.visits.size());
  for (const ArrowTerm& term : formula.terms) {
    long long count = 0;
    if (formula.domain == CurveKind::kLong) {
      KnotDiagram based = dia;
      based.kind = CurveKind::kLong;
      count = oracle_count_based(based, term.pattern, false);
    } else {
      for (int r = 0; r < std::max(nv, 1); ++r)
        count += oracle_count_based(rotate_code(dia, r), term.pattern, true);
    }
    total += term.coeff * Rational(count);
  }
  return total;
}

// --- fixture codes -----------------------------------------------------------

const char* kTrefoilRight = "O1+ U2+ O3+ U1+ O2+ U3+";
const char* kTrefoilLeft = "O1- U2- O3- U1- O2- U3-";

KnotDiagram mirror_code(const KnotDiagram& dia) {
  KnotDiagram out = dia;
  for (int& s : out.signs) s = -s;
  return out;
}

TEST(Parse, RoundTripAndValidation) {
  const KnotDiagram dia = KnotDiagram::parse(kTrefoilRight);
  EXPECT_EQ(dia.crossing_count(), 3);
  EXPECT_EQ(dia.visits.size(), 6u);
  EXPECT_TRUE(dia.alternating());
  EXPECT_EQ(dia.writhe(), 3);
  EXPECT_EQ(KnotDiagram::parse(dia.to_string()).to_string(), dia.to_string());
}

TEST(Parse, LabelsRenumberedByFirstAppearance) {
  const KnotDiagram dia = KnotDiagram::parse("O7- U9+ O9+ U7-");
  EXPECT_EQ(dia.crossing_count(), 2);
  EXPECT_EQ(dia.signs[0], -1);
  EXPECT_EQ(dia.signs[1], 1);
}

TEST(Parse, Errors) {
  EXPECT_THROW(KnotDiagram::parse("O1+ U1-"), InputError);   // sign clash
  EXPECT_THROW(KnotDiagram::parse("O1+"), InputError);       // single visit
  EXPECT_THROW(KnotDiagram::parse("O1+ O1+"), InputError);   // two overs
  EXPECT_THROW(KnotDiagram::parse("O1+ U1+ O1+ U1+"), InputError);
  EXPECT_THROW(KnotDiagram::parse("X1+ U1+"), InputError);   // bad token
  EXPECT_THROW(KnotDiagram::parse("O1? U1?"), InputError);   // bad sign
}

TEST(Formulas, ParseAndPrint) {
  const ArrowFormula v2 = formula_v2();
  EXPECT_EQ(v2.domain, CurveKind::kLong);
  ASSERT_EQ(v2.terms.size(), 1u);
  EXPECT_EQ(v2.terms[0].coeff, Rational(1));
  EXPECT_EQ(v2.terms[0].pattern.points, 4);

  const ArrowFormula v3 = formula_v3();
  EXPECT_EQ(v3.domain, CurveKind::kCompact);
  ASSERT_EQ(v3.terms.size(), 2u);
  EXPECT_EQ(v3.terms[0].coeff, Rational(1, 2));
  EXPECT_EQ(v3.terms[1].coeff, Rational(1, 3));

  const ArrowFormula reparsed =
      ArrowFormula::parse(v3.to_string(), "v3", CurveKind::kCompact);
  EXPECT_EQ(reparsed.to_string(), v3.to_string());

  const ArrowFormula custom = ArrowFormula::parse(
      "2*D[1>3, 2>4] - 1/3*D[1>4, 2>3]", "custom", CurveKind::kLong);
  EXPECT_EQ(custom.terms.size(), 2u);
  EXPECT_EQ(custom.terms[1].coeff, Rational(-1, 3));
}

TEST(FrozenValues, UnknotCodes) {
  const KnotDiagram empty = KnotDiagram::parse("");
  EXPECT_EQ(evaluate_formula(formula_v2(), empty), Rational(0));
  EXPECT_EQ(evaluate_formula(formula_v3(), empty), Rational(0));
  const KnotDiagram curl = KnotDiagram::parse("O1+ U1+");
  EXPECT_EQ(evaluate_formula(formula_v2(), curl), Rational(0));
  EXPECT_EQ(evaluate_formula(formula_v3(), curl), Rational(0));
}

TEST(FrozenValues, TrefoilChirality) {
  const KnotDiagram right = KnotDiagram::parse(kTrefoilRight);
  const KnotDiagram left = KnotDiagram::parse(kTrefoilLeft);
  EXPECT_EQ(evaluate_formula(formula_v2(), right), Rational(1));
  EXPECT_EQ(evaluate_formula(formula_v2(), left), Rational(1));
  EXPECT_EQ(evaluate_formula(formula_v3(), right), Rational(1));
  EXPECT_EQ(evaluate_formula(formula_v3(), left), Rational(-1));
}

TEST(FrozenValues, MirrorNegatesOrderThree) {
  for (const char* code : {kTrefoilRight, kTrefoilLeft}) {
    const KnotDiagram dia = KnotDiagram::parse(code);
    EXPECT_EQ(evaluate_formula(formula_v3(), mirror_code(dia)),
              -evaluate_formula(formula_v3(), dia));
    EXPECT_EQ(evaluate_formula(formula_v2(), mirror_code(dia)),
              evaluate_formula(formula_v2(), dia));
  }
}

TEST(FrozenValues, FigureEightFromProjection) {
  const KnotDiagram dia = project_to_diagram(fixture_compact_figure_eight());
  EXPECT_EQ(dia.crossing_count(), 4);
  EXPECT_TRUE(dia.alternating());
  EXPECT_EQ(dia.writhe(), 0);
  EXPECT_EQ(evaluate_formula(formula_v2(), dia), Rational(-1));
  EXPECT_EQ(evaluate_formula(formula_v3(), dia), Rational(0));
}

TEST(OracleAgreement, AllFixtureCodes) {
  std::vector<KnotDiagram> dias;
  dias.push_back(KnotDiagram::parse(""));
  dias.push_back(KnotDiagram::parse("O1+ U1+"));
  dias.push_back(KnotDiagram::parse(kTrefoilRight));
  dias.push_back(KnotDiagram::parse(kTrefoilLeft));
  dias.push_back(KnotDiagram::parse(kTrefoilRight).with_kink(2, -1, true));
  dias.push_back(KnotDiagram::parse(kTrefoilLeft).with_kink(5, 1, false));
  dias.push_back(project_to_diagram(fixture_compact_figure_eight()));
  dias.push_back(project_to_diagram(fixture_compact_trefoil()));
  for (const KnotDiagram& dia : dias) {
    EXPECT_EQ(evaluate_formula(formula_v2(), dia),
              oracle_eval(formula_v2(), dia))
        << dia.to_string();
    EXPECT_EQ(evaluate_formula(formula_v3(), dia),
              oracle_eval(formula_v3(), dia))
        << dia.to_string();
  }
}

TEST(Invariance, ReidemeisterOneKinks) {
  const KnotDiagram base = KnotDiagram::parse(kTrefoilRight);
  const Rational v2_base = evaluate_formula(formula_v2(), base);
  const Rational v3_base = evaluate_formula(formula_v3(), base);
  for (int pos : {0, 2, 5}) {
    for (int sign : {1, -1}) {
      for (bool over_first : {true, false}) {
        const KnotDiagram kinked = base.with_kink(pos, sign, over_first);
        EXPECT_EQ(kinked.crossing_count(), 4);
        EXPECT_EQ(kinked.writhe(), base.writhe() + sign);
        EXPECT_EQ(evaluate_formula(formula_v2(), kinked), v2_base)
            << kinked.to_string();
        EXPECT_EQ(evaluate_formula(formula_v3(), kinked), v3_base)
            << kinked.to_string();
      }
    }
  }
}

TEST(Invariance, ThreeReidemeisterRelatedCodes) {
  // The acceptance trio: a clean code and two curled variants of it.
  const KnotDiagram t0 = KnotDiagram::parse(kTrefoilRight);
  const KnotDiagram t1 = t0.with_kink(2, -1, true);
  const KnotDiagram t2 = t0.with_kink(5, 1, false).with_kink(1, 1, true);
  const Rational v2 = evaluate_formula(formula_v2(), t0);
  EXPECT_EQ(evaluate_formula(formula_v2(), t1), v2);
  EXPECT_EQ(evaluate_formula(formula_v2(), t2), v2);
  const Rational v3 = evaluate_formula(formula_v3(), t0);
  EXPECT_EQ(evaluate_formula(formula_v3(), t1), v3);
  EXPECT_EQ(evaluate_formula(formula_v3(), t2), v3);
}

TEST(Invariance, BasepointRotation) {
  for (const char* code : {kTrefoilRight, kTrefoilLeft}) {
    const KnotDiagram dia = KnotDiagram::parse(code);
    const Rational v2 = evaluate_formula(formula_v2(), dia);
    const Rational v3 = evaluate_formula(formula_v3(), dia);
    for (int r = 1; r < static_cast<int>(dia.visits.size()); ++r) {
      const KnotDiagram rot = rotate_code(dia, r);
      EXPECT_EQ(evaluate_formula(formula_v2(), rot), v2) << r;
      EXPECT_EQ(evaluate_formula(formula_v3(), rot), v3) << r;
    }
  }
}

TEST(Domains, AbsoluteFormulaRejectsLongDiagram) {
  KnotDiagram dia = KnotDiagram::parse(kTrefoilRight, CurveKind::kLong);
  EXPECT_THROW(evaluate_formula(formula_v3(), dia), InputError);
  // The based formula accepts both kinds.
  EXPECT_EQ(evaluate_formula(formula_v2(), dia), Rational(1));
}

TEST(Projection, CompactTrefoilMatchesHandedCodes) {
  const KnotDiagram dia = project_to_diagram(fixture_compact_trefoil(false));
  EXPECT_EQ(dia.crossing_count(), 3);
  EXPECT_TRUE(dia.alternating());
  for (int s : dia.signs) EXPECT_EQ(s, -1);
  EXPECT_EQ(evaluate_formula(formula_v2(), dia), Rational(1));
  EXPECT_EQ(evaluate_formula(formula_v3(), dia), Rational(-1));

  const KnotDiagram mirror = project_to_diagram(fixture_compact_trefoil(true));
  for (int s : mirror.signs) EXPECT_EQ(s, 1);
  EXPECT_EQ(evaluate_formula(formula_v3(), mirror), Rational(1));
}

}  // namespace
}  // namespace knotstrata
