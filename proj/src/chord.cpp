#include "knotstrata/chord.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace knotstrata {

namespace {

// Union-find connectivity check for one group's chords.
bool chords_span(const std::vector<int>& members,
                 const std::vector<std::pair<int, int>>& chords) {
  if (members.size() <= 1) return true;
  std::map<int, int> parent;
  for (int m : members) parent[m] = m;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : chords) {
    if (parent.count(a) && parent.count(b)) parent[find(a)] = find(b);
  }
  int root = find(members[0]);
  for (int m : members)
    if (find(m) != root) return false;
  return true;
}

}  // namespace

GCDCell::GCDCell(std::vector<GCDSite> sites,
                 std::vector<std::pair<int, int>> chords)
    : sites_(std::move(sites)), chords_(std::move(chords)) {
  // Canonicalize: groups renamed by first appearance, chord endpoints sorted,
  // chords sorted.
  std::map<int, int> remap;
  for (auto& s : sites_) {
    if (s.group < 0) continue;
    auto it = remap.find(s.group);
    if (it == remap.end()) {
      int id = static_cast<int>(remap.size());
      remap[s.group] = id;
      s.group = id;
    } else {
      s.group = it->second;
    }
  }
  for (auto& c : chords_)
    if (c.first > c.second) std::swap(c.first, c.second);
  std::sort(chords_.begin(), chords_.end());
  validate();
}

GCDCell GCDCell::parse(const std::string& text) {
  auto semi = text.find(';');
  std::string site_part = text.substr(0, semi);
  std::string chord_part =
      (semi == std::string::npos) ? "" : text.substr(semi + 1);

  std::vector<GCDSite> sites;
  std::istringstream sin(site_part);
  std::string tok;
  std::map<char, int> group_ids;
  while (sin >> tok) {
    GCDSite s;
    if (!tok.empty() && tok.back() == '*') {
      s.star = true;
      tok.pop_back();
    }
    if (tok.empty() || tok == ".") {
      s.group = -1;
    } else if (tok.size() == 1 && std::islower(tok[0])) {
      auto it = group_ids.find(tok[0]);
      if (it == group_ids.end()) {
        s.group = static_cast<int>(group_ids.size());
        group_ids[tok[0]] = s.group;
      } else {
        s.group = it->second;
      }
    } else {
      throw InputError("bad site token: " + tok);
    }
    sites.push_back(s);
  }

  std::vector<std::pair<int, int>> chords;
  std::istringstream cin_(chord_part);
  while (cin_ >> tok) {
    auto dash = tok.find('-');
    if (dash == std::string::npos)
      throw InputError("bad chord token: " + tok);
    int a = 0, b = 0;
    try {
      a = std::stoi(tok.substr(0, dash));
      b = std::stoi(tok.substr(dash + 1));
    } catch (const std::exception&) {
      throw InputError("bad chord token: " + tok);
    }
    chords.emplace_back(a - 1, b - 1);
  }
  return GCDCell(std::move(sites), std::move(chords));
}

std::string GCDCell::to_string() const {
  std::ostringstream out;
  for (size_t i = 0; i < sites_.size(); ++i) {
    if (i) out << ' ';
    if (sites_[i].group >= 0)
      out << static_cast<char>('a' + sites_[i].group);
    else
      out << '.';
    if (sites_[i].star) out << '*';
  }
  out << " ;";
  for (auto [a, b] : chords_) out << ' ' << (a + 1) << '-' << (b + 1);
  return out.str();
}

int GCDCell::star_count() const {
  int b = 0;
  for (const auto& s : sites_) b += s.star ? 1 : 0;
  return b;
}

int GCDCell::group_count() const {
  int g = 0;
  for (const auto& s : sites_) g = std::max(g, s.group + 1);
  return g;
}

std::vector<int> GCDCell::group_sizes() const {
  std::vector<int> sizes(group_count(), 0);
  for (const auto& s : sites_)
    if (s.group >= 0) sizes[s.group]++;
  return sizes;
}

int GCDCell::complexity() const {
  int p = star_count();
  for (int a : group_sizes()) p += a - 1;
  return p;
}

int GCDCell::degree() const {
  return site_count() + static_cast<int>(chords_.size()) + star_count() - 1;
}

bool GCDCell::spanning() const {
  int gc = group_count();
  for (int g = 0; g < gc; ++g) {
    std::vector<int> members;
    for (int i = 0; i < site_count(); ++i)
      if (sites_[i].group == g) members.push_back(i);
    std::vector<std::pair<int, int>> gchords;
    for (auto c : chords_)
      if (sites_[c.first].group == g) gchords.push_back(c);
    if (!chords_span(members, gchords)) return false;
  }
  return true;
}

void GCDCell::validate() const {
  int m = site_count();
  if (m == 0) throw InputError("cell needs at least one site");
  std::vector<int> sizes = group_sizes();
  for (size_t g = 0; g < sizes.size(); ++g)
    if (sizes[g] < 2)
      throw InputError("group " + std::string(1, char('a' + g)) +
                       " needs at least two sites");
  for (const auto& s : sites_)
    if (s.group < 0 && !s.star)
      throw InputError("every site needs a group or a star");
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : chords_) {
    if (a < 0 || b < 0 || a >= m || b >= m || a == b)
      throw InputError("chord endpoints out of range");
    if (sites_[a].group < 0 || sites_[a].group != sites_[b].group)
      throw InputError("chords must join sites of one group");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw InputError("duplicate chord");
  }
  if (!spanning()) throw InputError("chords must span every group");
}

std::vector<GCDCell> GCDCell::boundary() const {
  std::map<std::string, GCDCell> acc;
  auto toggle = [&acc](const GCDCell& c) {
    std::string key = c.to_string();
    auto it = acc.find(key);
    if (it == acc.end())
      acc.emplace(key, c);
    else
      acc.erase(it);
  };

  // Source 1: chord deletions that keep every group spanned.
  for (size_t k = 0; k < chords_.size(); ++k) {
    std::vector<std::pair<int, int>> rest;
    for (size_t j = 0; j < chords_.size(); ++j)
      if (j != k) rest.push_back(chords_[j]);
    GCDCell cand;
    cand.sites_ = sites_;
    cand.chords_ = rest;
    if (cand.spanning()) toggle(GCDCell(cand.sites_, cand.chords_));
  }

  // Source 2: collisions of adjacent sites i, i+1 that preserve complexity.
  const int m = site_count();
  for (int i = 0; i + 1 < m; ++i) {
    const GCDSite& L = sites_[i];
    const GCDSite& R = sites_[i + 1];

    GCDSite merged;
    bool ok = false;
    bool contract_chord = false;  // remove the chord joining i and i+1

    if (L.group >= 0 && L.group == R.group) {
      // Same group: only a contraction along a chord preserves complexity;
      // the contraction adds a star, so neither site may already carry one.
      bool have_chord = false;
      for (auto c : chords_)
        if ((c.first == i && c.second == i + 1)) have_chord = true;
      if (!have_chord || L.star || R.star) continue;
      merged.star = true;
      contract_chord = true;
      // Group shrinks by one; dissolve if only one site remains.
      int size = 0;
      for (const auto& s : sites_) size += (s.group == L.group) ? 1 : 0;
      merged.group = (size - 1 >= 2) ? L.group : -1;
      ok = true;
    } else if (L.group >= 0 && R.group >= 0) {
      // Different groups merge through the collision point.
      if (L.star && R.star) continue;
      merged.star = L.star || R.star;
      merged.group = L.group;  // groups fused below
      ok = true;
    } else if (L.group >= 0 || R.group >= 0) {
      // Grouped site meets a free star: merged dual-tag site.
      const GCDSite& grouped = (L.group >= 0) ? L : R;
      if (L.star && R.star) continue;  // grouped one already starred
      merged.group = grouped.group;
      merged.star = true;
      ok = true;
    } else {
      // Two free stars collide: not a face of this complex.
      continue;
    }
    if (!ok) continue;

    // Build merged site list.
    std::vector<GCDSite> nsites;
    for (int j = 0; j < m; ++j) {
      if (j == i) {
        nsites.push_back(merged);
      } else if (j == i + 1) {
        continue;
      } else {
        nsites.push_back(sites_[j]);
      }
    }
    // Group fusion (different-group case): relabel R.group to L.group.
    if (L.group >= 0 && R.group >= 0 && L.group != R.group) {
      for (auto& s : nsites)
        if (s.group == R.group) s.group = L.group;
    }
    // Dissolved group: clear membership of the remaining former member.
    if (L.group >= 0 && L.group == R.group && merged.group == -1) {
      for (auto& s : nsites)
        if (s.group == L.group) s.group = -1;
    }

    // Reindex chords through the merge.
    auto reindex = [i](int j) { return (j <= i) ? std::min(j, i) : j - 1; };
    std::vector<std::pair<int, int>> nchords;
    bool valid = true;
    std::set<std::pair<int, int>> seen;
    for (auto c : chords_) {
      if (contract_chord && ((c.first == i && c.second == i + 1) ||
                             (c.first == i + 1 && c.second == i)))
        continue;  // the contracted chord disappears
      int a = reindex(c.first), b = reindex(c.second);
      if (a == b) {
        valid = false;  // another chord collapsed to a loop
        break;
      }
      auto key = std::minmax(a, b);
      if (!seen.insert({key.first, key.second}).second) {
        valid = false;  // parallel chords
        break;
      }
      nchords.emplace_back(a, b);
    }
    if (!valid) continue;

    GCDCell cand(std::move(nsites), std::move(nchords));
    if (cand.complexity() != complexity()) continue;
    if (cand.degree() != degree() - 1) continue;
    toggle(cand);
  }

  std::vector<GCDCell> out;
  for (auto& [key, cell] : acc) out.push_back(cell);
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

// All connected (spanning) chord subsets of the complete graph on the given
// member indices.
std::vector<std::vector<std::pair<int, int>>> spanning_sets(
    const std::vector<int>& members) {
  std::vector<std::pair<int, int>> all;
  for (size_t i = 0; i < members.size(); ++i)
    for (size_t j = i + 1; j < members.size(); ++j)
      all.emplace_back(members[i], members[j]);
  std::vector<std::vector<std::pair<int, int>>> out;
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<std::pair<int, int>> sub;
    for (size_t k = 0; k < all.size(); ++k)
      if (mask & (1u << k)) sub.push_back(all[k]);
    if (chords_span(members, sub)) out.push_back(sub);
  }
  return out;
}

void partitions_into_parts(int total, int max_part,
                           std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(total, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_into_parts(total - part, part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<GCDCell> enumerate_cells(int p) {
  if (p < 1 || p > 4)
    throw InputError("cell enumeration supports complexity 1..4");
  std::map<std::string, GCDCell> found;

  for (int stars = 0; stars <= p; ++stars) {
    int excess = p - stars;
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions_into_parts(excess, excess, cur, parts);
    if (excess == 0) parts.push_back({});

    for (const auto& part : parts) {
      std::vector<int> group_sizes;
      for (int e : part) group_sizes.push_back(e + 1);
      int gsites = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);

      // Multiset permutations of group labels.
      std::vector<int> base;
      for (size_t g = 0; g < group_sizes.size(); ++g)
        for (int k = 0; k < group_sizes[g]; ++k)
          base.push_back(static_cast<int>(g));
      std::sort(base.begin(), base.end());

      do {
        // Distribute stars: `fs` free star sites interleaved, the rest dual
        // tags on group sites.
        for (int fs = 0; fs <= stars; ++fs) {
          int dual = stars - fs;
          int m = gsites + fs;
          if (gsites == 0 && fs != stars) continue;
          // Choose free-star positions among m slots.
          std::vector<int> slot_sel(m, 0);
          std::fill(slot_sel.begin(), slot_sel.begin() + fs, 1);
          std::sort(slot_sel.begin(), slot_sel.end());
          do {
            // Map group sites in order into the non-star slots.
            std::vector<GCDSite> sites(m);
            std::vector<int> group_site_pos;
            {
              int gi = 0;
              for (int s = 0; s < m; ++s) {
                if (slot_sel[s]) {
                  sites[s] = GCDSite{-1, true};
                } else {
                  sites[s] = GCDSite{base[gi++], false};
                  group_site_pos.push_back(s);
                }
              }
            }
            // Choose dual-star placements among group sites.
            std::vector<int> dual_sel(group_site_pos.size(), 0);
            if (dual > static_cast<int>(group_site_pos.size())) continue;
            std::fill(dual_sel.begin(), dual_sel.begin() + dual, 1);
            std::sort(dual_sel.begin(), dual_sel.end());
            do {
              std::vector<GCDSite> sites2 = sites;
              for (size_t k = 0; k < dual_sel.size(); ++k)
                if (dual_sel[k]) sites2[group_site_pos[k]].star = true;

              // Spanning chord choices per group.
              std::vector<std::vector<std::vector<std::pair<int, int>>>>
                  per_group;
              bool any_empty = false;
              for (size_t g = 0; g < group_sizes.size(); ++g) {
                std::vector<int> members;
                for (int s = 0; s < m; ++s)
                  if (sites2[s].group == static_cast<int>(g))
                    members.push_back(s);
                auto sets = spanning_sets(members);
                if (sets.empty()) any_empty = true;
                per_group.push_back(std::move(sets));
              }
              if (any_empty) continue;
              // Cartesian product over groups.
              std::vector<size_t> idx(per_group.size(), 0);
              while (true) {
                std::vector<std::pair<int, int>> chords;
                for (size_t g = 0; g < per_group.size(); ++g)
                  for (auto c : per_group[g][idx[g]]) chords.push_back(c);
                GCDCell cell(sites2, chords);
                found.emplace(cell.to_string(), cell);
                // advance
                size_t g = 0;
                for (; g < idx.size(); ++g) {
                  if (++idx[g] < per_group[g].size()) break;
                  idx[g] = 0;
                }
                if (per_group.empty() || g == idx.size()) break;
              }
            } while (std::next_permutation(dual_sel.begin(), dual_sel.end()));
          } while (std::next_permutation(slot_sel.begin(), slot_sel.end()));
        }
      } while (std::next_permutation(base.begin(), base.end()));
    }
  }

  std::vector<GCDCell> out;
  for (auto& [key, cell] : found) {
    if (cell.complexity() == p) out.push_back(cell);
  }
  return out;
}

// ---------------------------------------------------------------------------
// GF(2) chains
// ---------------------------------------------------------------------------

GF2Chain::GF2Chain(const std::vector<GCDCell>& cells) {
  for (const auto& c : cells) toggle(c);
}

void GF2Chain::toggle(const GCDCell& cell) {
  std::string key = cell.to_string();
  auto it = cells_.find(key);
  if (it == cells_.end())
    cells_.emplace(key, cell);
  else
    cells_.erase(it);
}

std::vector<GCDCell> GF2Chain::cells() const {
  std::vector<GCDCell> out;
  for (auto& [k, c] : cells_) out.push_back(c);
  return out;
}

GF2Chain GF2Chain::boundary() const {
  GF2Chain out;
  for (auto& [k, c] : cells_)
    for (const GCDCell& b : c.boundary()) out.toggle(b);
  return out;
}

int GF2Chain::degree() const {
  if (cells_.empty()) throw InputError("degree of an empty chain");
  int d = cells_.begin()->second.degree();
  for (auto& [k, c] : cells_)
    if (c.degree() != d) throw InputError("chain mixes degrees");
  return d;
}

// ---------------------------------------------------------------------------
// ChordComplex
// ---------------------------------------------------------------------------

ChordComplex::ChordComplex(int p) : p_(p) {
  for (const GCDCell& c : enumerate_cells(p)) {
    auto& bucket = by_degree_[c.degree()];
    index_[c.to_string()] = static_cast<int>(bucket.size());
    bucket.push_back(c);
  }
}

std::vector<int> ChordComplex::degrees() const {
  std::vector<int> out;
  for (auto& [d, cells] : by_degree_) out.push_back(d);
  return out;
}

const std::vector<GCDCell>& ChordComplex::cells(int degree) const {
  static const std::vector<GCDCell> empty;
  auto it = by_degree_.find(degree);
  return (it == by_degree_.end()) ? empty : it->second;
}

std::vector<std::vector<uint8_t>> ChordComplex::boundary_matrix(
    int degree) const {
  const auto& domain = cells(degree);
  const auto& range = cells(degree - 1);
  std::vector<std::vector<uint8_t>> mat(
      range.size(), std::vector<uint8_t>(domain.size(), 0));
  for (size_t j = 0; j < domain.size(); ++j) {
    for (const GCDCell& b : domain[j].boundary()) {
      auto it = index_.find(b.to_string());
      if (it == index_.end() || b.degree() != degree - 1)
        throw InputError("boundary left the complex");
      mat[it->second][j] = 1;
    }
  }
  return mat;
}

namespace {

// GF(2) rank by Gaussian elimination; optionally solves mat * x = rhs,
// returning false when inconsistent.
int gf2_rank(std::vector<std::vector<uint8_t>> mat) {
  if (mat.empty()) return 0;
  size_t rows = mat.size(), cols = mat[0].size();
  int rank = 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && !mat[pivot][c]) pivot++;
    if (pivot == rows) continue;
    std::swap(mat[r], mat[pivot]);
    for (size_t i = 0; i < rows; ++i)
      if (i != r && mat[i][c])
        for (size_t k = c; k < cols; ++k) mat[i][k] ^= mat[r][k];
    ++r;
    ++rank;
  }
  return rank;
}

bool gf2_solvable(std::vector<std::vector<uint8_t>> mat,
                  std::vector<uint8_t> rhs) {
  size_t rows = mat.size();
  if (rows == 0) {
    for (uint8_t v : rhs)
      if (v) return false;
    return true;
  }
  size_t cols = mat[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && !mat[pivot][c]) pivot++;
    if (pivot == rows) continue;
    std::swap(mat[r], mat[pivot]);
    std::swap(rhs[r], rhs[pivot]);
    for (size_t i = 0; i < rows; ++i) {
      if (i != r && mat[i][c]) {
        for (size_t k = c; k < cols; ++k) mat[i][k] ^= mat[r][k];
        rhs[i] ^= rhs[r];
      }
    }
    ++r;
  }
  for (size_t i = r; i < rows; ++i) {
    bool all_zero = true;
    for (size_t k = 0; k < cols; ++k)
      if (mat[i][k]) {
        all_zero = false;
        break;
      }
    if (all_zero && rhs[i]) return false;
  }
  // Rows below r are all zero rows by construction of the elimination.
  for (size_t i = 0; i < rows; ++i) {
    bool all_zero = true;
    for (size_t k = 0; k < cols; ++k)
      if (mat[i][k]) {
        all_zero = false;
        break;
      }
    if (all_zero && rhs[i]) return false;
  }
  return true;
}

}  // namespace

bool ChordComplex::d_squared_zero() const {
  for (auto& [d, cells_d] : by_degree_) {
    for (const GCDCell& c : cells_d) {
      GF2Chain chain({c});
      if (!chain.boundary().boundary().empty()) return false;
    }
  }
  return true;
}

std::map<int, int> ChordComplex::homology_ranks() const {
  std::map<int, int> out;
  for (auto& [d, cells_d] : by_degree_) {
    int dim = static_cast<int>(cells_d.size());
    int rank_d = gf2_rank(boundary_matrix(d));            // out of degree d
    int rank_up = gf2_rank(boundary_matrix(d + 1));       // into degree d
    out[d] = dim - rank_d - rank_up;
  }
  return out;
}

bool ChordComplex::in_boundary_image(const GF2Chain& chain) const {
  if (chain.empty()) return true;
  int d = chain.degree();
  const auto& range = cells(d);
  auto mat = boundary_matrix(d + 1);
  std::vector<uint8_t> rhs(range.size(), 0);
  for (const GCDCell& c : chain.cells()) {
    auto it = index_.find(c.to_string());
    if (it == index_.end()) throw InputError("chain cell not in complex");
    rhs[it->second] = 1;
  }
  if (mat.empty())
    return std::all_of(rhs.begin(), rhs.end(),
                       [](uint8_t v) { return v == 0; });
  return gf2_solvable(std::move(mat), std::move(rhs));
}

// ---------------------------------------------------------------------------
// Frozen principal parts
// ---------------------------------------------------------------------------

GF2Chain principal_part_even() {
  return GF2Chain({
      GCDCell::parse("a b b a b ; 1-4 2-5 3-5"),
      GCDCell::parse("a a a a ; 1-3 1-4 2-4 3-4"),
  });
}

GF2Chain principal_part_odd() {
  return GF2Chain({
      GCDCell::parse("a a a a ; 1-3 2-3 2-4 3-4"),
      GCDCell::parse("a a a a ; 1-4 2-3 2-4 3-4"),
      GCDCell::parse("a b b a b ; 1-4 2-5 3-5"),
      GCDCell::parse("a b a b a ; 1-5 2-4 3-5"),
      GCDCell::parse("a a b a b ; 1-4 2-4 3-5"),
  });
}

bool verify_cycle(const GF2Chain& chain) { return chain.boundary().empty(); }

}  // namespace knotstrata
