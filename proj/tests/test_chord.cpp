// Chord-diagram cell complex: canonical forms, the boundary operator against
// the frozen golden equations, exhaustive d^2 = 0, census sizes, and GF(2)
// homology ranks for complexities 1..3.

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "knotstrata/chord.hpp"

namespace knotstrata {
namespace {

// Shorthand cells used by the golden equations (complexity 2).
const char* kCrossed = "a b a b ; 1-3 2-4";
const char* kDisjoint = "a a b b ; 1-2 3-4";
const char* kNested = "a b b a ; 1-4 2-3";
const char* kTriangle = "a a a ; 1-2 1-3 2-3";
const char* kTreeLeft = "a a a ; 1-2 1-3";
const char* kTreeMid = "a a a ; 1-2 2-3";
const char* kTreeRight = "a a a ; 1-3 2-3";
const char* kStarBefore = ".* a a ; 2-3";
const char* kStarInside = "a .* a ; 1-3";
const char* kStarAfter = "a a .* ; 1-2";
const char* kStarLeftEnd = "a* a ; 1-2";
const char* kStarRightEnd = "a a* ; 1-2";
const char* kTwoStars = ".* .*";

std::set<std::string> boundary_texts(const std::string& cell_text) {
  std::set<std::string> out;
  for (const GCDCell& c : GCDCell::parse(cell_text).boundary())
    out.insert(c.to_string());
  return out;
}

std::set<std::string> texts(std::initializer_list<const char*> cells) {
  std::set<std::string> out;
  for (const char* c : cells) out.insert(GCDCell::parse(c).to_string());
  return out;
}

TEST(CellBasics, ParseRoundTripAndCounts) {
  const GCDCell cell = GCDCell::parse(kCrossed);
  EXPECT_EQ(cell.site_count(), 4);
  EXPECT_EQ(cell.group_count(), 2);
  EXPECT_EQ(cell.star_count(), 0);
  EXPECT_EQ(cell.complexity(), 2);
  EXPECT_EQ(cell.degree(), 4 + 2 - 1);
  EXPECT_EQ(GCDCell::parse(cell.to_string()).to_string(), cell.to_string());

  const GCDCell starred = GCDCell::parse("a* a ; 1-2");
  EXPECT_EQ(starred.star_count(), 1);
  EXPECT_EQ(starred.complexity(), 2);
  EXPECT_EQ(starred.degree(), 2 + 1 + 1 - 1);
}

TEST(CellBasics, CanonicalRelabeling) {
  // Group letters are renamed by first appearance and chords sorted.
  EXPECT_EQ(GCDCell::parse("b a b a ; 3-1 2-4").to_string(),
            GCDCell::parse("a b a b ; 1-3 2-4").to_string());
}

TEST(CellBasics, ValidationErrors) {
  // Chord across two groups.
  EXPECT_THROW(GCDCell::parse("a b a b ; 1-2"), InputError);
  // Non-spanning group (two components in a 4-group needs 3+ chords).
  EXPECT_THROW(GCDCell::parse("a a a a ; 1-2"), InputError);
  // Duplicate chord.
  EXPECT_THROW(GCDCell::parse("a a ; 1-2 1-2"), InputError);
  // Group with a single site.
  EXPECT_THROW(GCDCell::parse("a b b ; 2-3"), InputError);
  // Chord endpoint out of range.
  EXPECT_THROW(GCDCell::parse("a a ; 1-5"), InputError);
}

// The ten displayed boundary equations, reduced mod 2.
TEST(GoldenBoundaries, CrossedChords) {
  EXPECT_EQ(boundary_texts(kCrossed),
            texts({kTreeLeft, kTreeMid, kTreeRight}));
}

TEST(GoldenBoundaries, DisjointChords) {
  EXPECT_EQ(boundary_texts(kDisjoint),
            texts({kStarBefore, kTreeMid, kStarAfter}));
}

TEST(GoldenBoundaries, NestedChords) {
  EXPECT_EQ(boundary_texts(kNested),
            texts({kTreeLeft, kStarInside, kTreeRight}));
}

TEST(GoldenBoundaries, Triangle) {
  EXPECT_EQ(boundary_texts(kTriangle),
            texts({kTreeLeft, kTreeMid, kTreeRight}));
}

TEST(GoldenBoundaries, TreeLeft) {
  EXPECT_EQ(boundary_texts(kTreeLeft), texts({kStarLeftEnd}));
}

TEST(GoldenBoundaries, TreeMid) {
  EXPECT_EQ(boundary_texts(kTreeMid), texts({kStarLeftEnd, kStarRightEnd}));
}

TEST(GoldenBoundaries, TreeRight) {
  EXPECT_EQ(boundary_texts(kTreeRight), texts({kStarRightEnd}));
}

TEST(GoldenBoundaries, StarBeforeChord) {
  EXPECT_EQ(boundary_texts(kStarBefore), texts({kStarLeftEnd, kTwoStars}));
}

TEST(GoldenBoundaries, StarInsideChord) {
  EXPECT_EQ(boundary_texts(kStarInside),
            texts({kStarLeftEnd, kStarRightEnd}));
}

TEST(GoldenBoundaries, StarAfterChord) {
  EXPECT_EQ(boundary_texts(kStarAfter), texts({kTwoStars, kStarRightEnd}));
}

TEST(GoldenBoundaries, BottomCellsAreCycles) {
  EXPECT_TRUE(boundary_texts(kStarLeftEnd).empty());
  EXPECT_TRUE(boundary_texts(kStarRightEnd).empty());
  EXPECT_TRUE(boundary_texts(kTwoStars).empty());
}

TEST(GoldenBoundaries, SingleChordBoundsStar) {
  EXPECT_EQ(boundary_texts("a a ; 1-2"), texts({".*"}));
}

TEST(Census, ComplexityOne) {
  const std::vector<GCDCell> cells = enumerate_cells(1);
  std::set<std::string> got;
  for (const GCDCell& c : cells) got.insert(c.to_string());
  EXPECT_EQ(got, texts({"a a ; 1-2", ".*"}));
}

TEST(Census, ComplexityTwoHasThirteenCells) {
  const std::vector<GCDCell> cells = enumerate_cells(2);
  EXPECT_EQ(cells.size(), 13u);
  std::set<std::string> got;
  for (const GCDCell& c : cells) got.insert(c.to_string());
  EXPECT_EQ(got,
            texts({kCrossed, kDisjoint, kNested, kTriangle, kTreeLeft,
                   kTreeMid, kTreeRight, kStarBefore, kStarInside, kStarAfter,
                   kStarLeftEnd, kStarRightEnd, kTwoStars}));
}

TEST(Census, AllCellsValidWithRightComplexity) {
  for (int p = 1; p <= 3; ++p) {
    for (const GCDCell& c : enumerate_cells(p)) {
      EXPECT_NO_THROW(c.validate()) << c.to_string();
      EXPECT_EQ(c.complexity(), p) << c.to_string();
      EXPECT_TRUE(c.spanning()) << c.to_string();
    }
  }
}

TEST(Complex, BoundarySquaredIsZero) {
  for (int p = 1; p <= 3; ++p) {
    ChordComplex complex(p);
    EXPECT_TRUE(complex.d_squared_zero()) << "p=" << p;
  }
}

TEST(Complex, HomologyComplexityOneIsTrivial) {
  ChordComplex complex(1);
  for (const auto& [degree, rank] : complex.homology_ranks())
    EXPECT_EQ(rank, 0) << "degree " << degree;
}

TEST(Complex, HomologyComplexityTwoHasOneClass) {
  ChordComplex complex(2);
  const auto ranks = complex.homology_ranks();
  int nonzero = 0;
  for (const auto& [degree, rank] : ranks) {
    if (rank != 0) {
      ++nonzero;
      EXPECT_EQ(degree, 5);
      EXPECT_EQ(rank, 1);
    }
  }
  EXPECT_EQ(nonzero, 1);
  // The generator: crossed + triangle is a cycle and not a boundary.
  GF2Chain generator(
      {GCDCell::parse(kCrossed), GCDCell::parse(kTriangle)});
  EXPECT_TRUE(verify_cycle(generator));
  EXPECT_FALSE(complex.in_boundary_image(generator));
}

TEST(Complex, HomologyComplexityThreeHasTwoClasses) {
  ChordComplex complex(3);
  int nonzero = 0;
  for (const auto& [degree, rank] : complex.homology_ranks()) {
    if (rank != 0) {
      ++nonzero;
      EXPECT_EQ(rank, 1);
      EXPECT_TRUE(degree == 7 || degree == 8) << "degree " << degree;
    }
  }
  EXPECT_EQ(nonzero, 2);
}

TEST(PrincipalParts, BothAreCycles) {
  EXPECT_EQ(principal_part_even().degree(), 7);
  EXPECT_EQ(principal_part_odd().degree(), 7);
  EXPECT_TRUE(verify_cycle(principal_part_even()));
  EXPECT_TRUE(verify_cycle(principal_part_odd()));
}

TEST(PrincipalParts, RepresentNontrivialClasses) {
  ChordComplex complex(3);
  EXPECT_FALSE(complex.in_boundary_image(principal_part_even()));
  EXPECT_FALSE(complex.in_boundary_image(principal_part_odd()));
  // Degree-7 homology has rank one, so the two nontrivial cycles represent
  // the same class: their sum must be a boundary.
  GF2Chain sum = principal_part_even();
  for (const auto& cell : principal_part_odd().cells()) sum.toggle(cell);
  EXPECT_TRUE(complex.in_boundary_image(sum));
}

TEST(Chains, ToggleAndBoundary) {
  GF2Chain chain;
  chain.toggle(GCDCell::parse(kCrossed));
  chain.toggle(GCDCell::parse(kTriangle));
  chain.toggle(GCDCell::parse(kCrossed));
  EXPECT_EQ(chain.size(), 1u);
  // d(triangle) = all three trees.
  EXPECT_EQ(chain.boundary().size(), 3u);
}

}  // namespace
}  // namespace knotstrata
