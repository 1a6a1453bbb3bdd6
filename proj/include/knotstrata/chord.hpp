#pragma once

// Cell complex of generalized one-dimensional chord diagrams: ordered sites
// that are glued in groups and/or carry derivative stars, with chords
// spanning each group.  Boundary operator over GF(2), homology by Gaussian
// elimination.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "knotstrata/curve.hpp"

namespace knotstrata {

struct GCDSite {
  int group = -1;     // group id, -1 if the site is not glued
  bool star = false;  // derivative marking
};

class GCDCell {
 public:
  GCDCell() = default;
  GCDCell(std::vector<GCDSite> sites,
          std::vector<std::pair<int, int>> chords);

  // Text form: site tokens left to right, then ';' and chord list.  A site
  // token is a group letter ('a', 'b', ...) or '.' if unglued, with a '*'
  // suffix when starred.  Chords are '<i>-<j>' with 1-based site indices.
  // Example: "a b a b ; 1-3 2-4".
  static GCDCell parse(const std::string& text);
  std::string to_string() const;  // canonical form (groups relabeled)

  const std::vector<GCDSite>& sites() const { return sites_; }
  const std::vector<std::pair<int, int>>& chords() const { return chords_; }

  int site_count() const { return static_cast<int>(sites_.size()); }
  int star_count() const;
  int group_count() const;
  std::vector<int> group_sizes() const;

  int complexity() const;  // sum (group size - 1) + number of stars
  int degree() const;      // sites + chords + stars - 1
  bool spanning() const;   // chords connect every group

  void validate() const;  // throws InputError on malformed cells

  // GF(2) boundary: chord deletions that stay spanning plus adjacent-site
  // collisions that preserve complexity, XOR-reduced and canonicalized.
  std::vector<GCDCell> boundary() const;

  bool operator==(const GCDCell& other) const {
    return to_string() == other.to_string();
  }

 private:
  std::vector<GCDSite> sites_;
  std::vector<std::pair<int, int>> chords_;
};

// All valid cells of the given complexity (any degree), canonical and sorted.
std::vector<GCDCell> enumerate_cells(int p);

// A GF(2) chain: XOR-reduced set of cells keyed by canonical text.
class GF2Chain {
 public:
  GF2Chain() = default;
  explicit GF2Chain(const std::vector<GCDCell>& cells);
  void toggle(const GCDCell& cell);
  bool empty() const { return cells_.empty(); }
  size_t size() const { return cells_.size(); }
  std::vector<GCDCell> cells() const;
  GF2Chain boundary() const;
  int degree() const;  // degree of the cells (throws if mixed or empty)

 private:
  std::map<std::string, GCDCell> cells_;
};

// The whole complex at fixed complexity p: cells graded by degree, boundary
// matrices, d^2 = 0 check, homology ranks.
class ChordComplex {
 public:
  explicit ChordComplex(int p);
  int complexity() const { return p_; }
  std::vector<int> degrees() const;
  const std::vector<GCDCell>& cells(int degree) const;
  // GF(2) boundary matrix taking degree-d cells to degree-(d-1) cells;
  // entry (i, j) = 1 iff cell j's boundary contains cell i.
  std::vector<std::vector<uint8_t>> boundary_matrix(int degree) const;
  bool d_squared_zero() const;
  std::map<int, int> homology_ranks() const;  // degree -> GF(2) rank
  // Is the chain a boundary of a degree (chain.degree()+1) chain?
  bool in_boundary_image(const GF2Chain& chain) const;

 private:
  int p_;
  std::map<int, std::vector<GCDCell>> by_degree_;
  std::map<std::string, int> index_;  // canonical text -> index within degree
};

// The two frozen degree-7 complexity-3 chains used as principal parts of the
// order-3 cocycles (even and odd ambient dimension).
GF2Chain principal_part_even();
GF2Chain principal_part_odd();

bool verify_cycle(const GF2Chain& chain);

}  // namespace knotstrata
