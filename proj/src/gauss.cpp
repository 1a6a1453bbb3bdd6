#include "knotstrata/gauss.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace knotstrata {

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// KnotDiagram
// ---------------------------------------------------------------------------

KnotDiagram KnotDiagram::parse(const std::string& text, CurveKind kind) {
  KnotDiagram dia;
  dia.kind = kind;
  std::map<long, int> label_map;
  std::map<int, int> seen_signs;
  for (const std::string& tok : split_ws(text)) {
    if (tok.size() < 3) throw InputError("bad diagram token: " + tok);
    char role = static_cast<char>(std::toupper(tok[0]));
    if (role != 'O' && role != 'U')
      throw InputError("diagram token must start with O or U: " + tok);
    char sc = tok.back();
    if (sc != '+' && sc != '-')
      throw InputError("diagram token must end with + or -: " + tok);
    int sign = (sc == '+') ? 1 : -1;
    std::string num = tok.substr(1, tok.size() - 2);
    size_t pos = 0;
    long label = 0;
    try {
      label = std::stol(num, &pos);
    } catch (const std::exception&) {
      throw InputError("bad crossing label in token: " + tok);
    }
    if (pos != num.size() || label <= 0)
      throw InputError("bad crossing label in token: " + tok);
    auto it = label_map.find(label);
    int id;
    if (it == label_map.end()) {
      id = static_cast<int>(label_map.size());
      label_map[label] = id;
      dia.signs.push_back(sign);
    } else {
      id = it->second;
      if (dia.signs[id] != sign)
        throw InputError("inconsistent sign for crossing in token: " + tok);
    }
    dia.visits.push_back({id, role == 'O'});
  }
  dia.validate();
  return dia;
}

std::string KnotDiagram::to_string() const {
  std::ostringstream out;
  for (size_t i = 0; i < visits.size(); ++i) {
    if (i) out << ' ';
    out << (visits[i].over ? 'O' : 'U') << (visits[i].crossing + 1)
        << (signs[visits[i].crossing] > 0 ? '+' : '-');
  }
  return out.str();
}

void KnotDiagram::validate() const {
  int nc = crossing_count();
  if (static_cast<int>(visits.size()) != 2 * nc)
    throw InputError("diagram must visit each crossing exactly twice");
  std::vector<int> overs(nc, 0), unders(nc, 0);
  for (const Visit& v : visits) {
    if (v.crossing < 0 || v.crossing >= nc)
      throw InputError("diagram visit references unknown crossing");
    (v.over ? overs : unders)[v.crossing]++;
  }
  for (int i = 0; i < nc; ++i) {
    if (overs[i] != 1 || unders[i] != 1)
      throw InputError("each crossing needs one over and one under visit");
    if (signs[i] != 1 && signs[i] != -1)
      throw InputError("crossing sign must be +1 or -1");
  }
}

bool KnotDiagram::alternating() const {
  for (size_t i = 0; i + 1 < visits.size(); ++i)
    if (visits[i].over == visits[i + 1].over) return false;
  if (kind == CurveKind::kCompact && visits.size() >= 2 &&
      visits.back().over == visits.front().over)
    return false;
  return true;
}

int KnotDiagram::writhe() const {
  int w = 0;
  for (int s : signs) w += s;
  return w;
}

KnotDiagram KnotDiagram::with_kink(int position, int sign,
                                   bool over_first) const {
  if (position < 0 || position > static_cast<int>(visits.size()))
    throw InputError("kink position out of range");
  KnotDiagram out = *this;
  int id = out.crossing_count();
  out.signs.push_back(sign);
  Visit first{id, over_first}, second{id, !over_first};
  out.visits.insert(out.visits.begin() + position, {first, second});
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

KnotDiagram project_to_diagram(const ParamCurve& curve,
                               const CrossingOptions& opts) {
  std::vector<Crossing> crossings = find_crossings(curve, opts);
  struct Entry {
    double t;
    int crossing;
    bool over;
  };
  std::vector<Entry> entries;
  for (size_t i = 0; i < crossings.size(); ++i) {
    const Crossing& c = crossings[i];
    entries.push_back({c.s, static_cast<int>(i), c.over_is_s});
    entries.push_back({c.t, static_cast<int>(i), !c.over_is_s});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.t < b.t; });

  KnotDiagram dia;
  dia.kind = curve.kind();
  dia.signs.resize(crossings.size());
  for (size_t i = 0; i < crossings.size(); ++i)
    dia.signs[i] = crossings[i].diagram_sign();
  for (const Entry& e : entries) dia.visits.push_back({e.crossing, e.over});
  dia.validate();
  return dia;
}

// ---------------------------------------------------------------------------
// Arrow formulas
// ---------------------------------------------------------------------------

void ArrowPattern::validate() const {
  if (points != 2 * static_cast<int>(arrows.size()))
    throw InputError("arrow pattern must use every slot exactly once");
  std::vector<int> used(points, 0);
  for (auto [tail, head] : arrows) {
    if (tail < 1 || tail > points || head < 1 || head > points ||
        tail == head)
      throw InputError("arrow endpoints out of range");
    used[tail - 1]++;
    used[head - 1]++;
  }
  for (int u : used)
    if (u != 1) throw InputError("arrow pattern must use every slot exactly once");
}

namespace {

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    return Rational(num, den);
  } catch (const std::exception&) {
    throw InputError("bad rational coefficient: " + s);
  }
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\n\r");
  return s.substr(a, b - a + 1);
}

ArrowPattern parse_pattern(const std::string& body) {
  ArrowPattern pat;
  int max_slot = 0;
  std::string cur;
  auto flush = [&](const std::string& item) {
    std::string it = strip(item);
    if (it.empty()) return;
    auto gt = it.find('>');
    if (gt == std::string::npos)
      throw InputError("arrow must look like tail>head: " + it);
    int tail = 0, head = 0;
    try {
      tail = std::stoi(strip(it.substr(0, gt)));
      head = std::stoi(strip(it.substr(gt + 1)));
    } catch (const std::exception&) {
      throw InputError("bad arrow: " + it);
    }
    pat.arrows.emplace_back(tail, head);
    max_slot = std::max({max_slot, tail, head});
  };
  for (char ch : body) {
    if (ch == ',') {
      flush(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  flush(cur);
  pat.points = max_slot;
  pat.validate();
  return pat;
}

}  // namespace

ArrowFormula ArrowFormula::parse(const std::string& text,
                                 const std::string& name, CurveKind domain) {
  ArrowFormula f;
  f.name = name;
  f.domain = domain;
  // Split into signed terms at top level ('+'/'-' outside brackets).
  std::vector<std::pair<int, std::string>> raw_terms;
  int depth = 0, sign = 1;
  std::string cur;
  for (char ch : text) {
    if (ch == '[') depth++;
    if (ch == ']') depth--;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      if (!strip(cur).empty()) raw_terms.emplace_back(sign, cur);
      sign = (ch == '+') ? 1 : -1;
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!strip(cur).empty()) raw_terms.emplace_back(sign, cur);
  if (raw_terms.empty()) throw InputError("empty formula");

  for (auto& [tsign, term] : raw_terms) {
    std::string t = strip(term);
    Rational coeff(1);
    auto star = t.find('*');
    auto bracket = t.find("D[");
    if (bracket == std::string::npos)
      throw InputError("formula term needs a D[...] pattern: " + t);
    if (star != std::string::npos && star < bracket)
      coeff = parse_rational(strip(t.substr(0, star)));
    auto close = t.find(']', bracket);
    if (close == std::string::npos) throw InputError("unclosed pattern: " + t);
    ArrowTerm at;
    at.coeff = coeff * tsign;
    at.pattern = parse_pattern(t.substr(bracket + 2, close - bracket - 2));
    f.terms.push_back(std::move(at));
  }
  return f;
}

std::string ArrowFormula::to_string() const {
  std::ostringstream out;
  for (size_t i = 0; i < terms.size(); ++i) {
    Rational c = terms[i].coeff;
    if (i) out << (c < Rational(0) ? " - " : " + ");
    else if (c < Rational(0)) out << "-";
    Rational a = c < Rational(0) ? -c : c;
    if (a != Rational(1)) {
      out << a.numerator();
      if (a.denominator() != 1) out << '/' << a.denominator();
      out << " * ";
    }
    out << "D[";
    for (size_t j = 0; j < terms[i].pattern.arrows.size(); ++j) {
      if (j) out << ", ";
      out << terms[i].pattern.arrows[j].first << '>'
          << terms[i].pattern.arrows[j].second;
    }
    out << ']';
  }
  return out.str();
}

ArrowFormula formula_v2() {
  return ArrowFormula::parse("D[1>3, 4>2]", "v2", CurveKind::kLong);
}

ArrowFormula formula_v3() {
  return ArrowFormula::parse("1/2 * D[1>3, 2>5, 4>6] + 1/3 * D[2>5, 4>1, 6>3]",
                             "v3", CurveKind::kCompact);
}

std::vector<std::string> formula_names() { return {"v2", "v3"}; }

ArrowFormula formula_by_name(const std::string& name) {
  if (name == "v2") return formula_v2();
  if (name == "v3") return formula_v3();
  throw InputError("unknown formula: " + name);
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

namespace {

// Role of each slot in a pattern: which arrow it belongs to and whether it is
// the tail (under) or head (over) end.
struct SlotRole {
  int arrow;
  bool tail;
};

std::vector<SlotRole> slot_roles(const ArrowPattern& pat) {
  std::vector<SlotRole> roles(pat.points);
  for (size_t a = 0; a < pat.arrows.size(); ++a) {
    roles[pat.arrows[a].first - 1] = {static_cast<int>(a), true};
    roles[pat.arrows[a].second - 1] = {static_cast<int>(a), false};
  }
  return roles;
}

// Count sign-weighted order-preserving matchings of the pattern into the
// linear visit sequence [begin, begin + len) of `dia` visited through
// rotation offset `rot` (for cyclic counting).
long long match_linear(const KnotDiagram& dia, const std::vector<SlotRole>& roles,
                       const ArrowPattern& pat, int rot, bool fix_first) {
  const int nv = static_cast<int>(dia.visits.size());
  const int na = static_cast<int>(pat.arrows.size());
  std::vector<int> arrow_crossing(na, -1);
  std::vector<char> crossing_used(dia.crossing_count(), 0);
  long long total = 0;

  // Depth-first over slots; slot s maps to visit position >= from.
  auto rec = [&](auto&& self, int slot, int from) -> void {
    if (slot == pat.points) {
      long long w = 1;
      for (int a = 0; a < na; ++a) w *= dia.signs[arrow_crossing[a]];
      total += w;
      return;
    }
    int limit = (fix_first && slot == 0) ? from + 1 : nv;
    for (int pos = from; pos < limit; ++pos) {
      const auto& v = dia.visits[(pos + rot) % nv];
      const SlotRole& role = roles[slot];
      bool want_over = !role.tail;
      if (v.over != want_over) continue;
      int& slotc = arrow_crossing[role.arrow];
      if (slotc == -1) {
        if (crossing_used[v.crossing]) continue;
        slotc = v.crossing;
        crossing_used[v.crossing] = 1;
        self(self, slot + 1, pos + 1);
        crossing_used[v.crossing] = 0;
        slotc = -1;
      } else {
        if (slotc != v.crossing) continue;
        self(self, slot + 1, pos + 1);
      }
    }
  };
  rec(rec, 0, 0);
  return total;
}

}  // namespace

Rational evaluate_formula(const ArrowFormula& formula,
                          const KnotDiagram& dia) {
  dia.validate();
  if (formula.domain == CurveKind::kCompact &&
      dia.kind == CurveKind::kLong)
    throw InputError("absolute formula cannot be evaluated on a long diagram");

  const int nv = static_cast<int>(dia.visits.size());
  Rational result(0);
  for (const ArrowTerm& term : formula.terms) {
    std::vector<SlotRole> roles = slot_roles(term.pattern);
    long long count = 0;
    if (formula.domain == CurveKind::kLong) {
      // Based count: linear order (compact diagrams are cut at the basepoint).
      count = match_linear(dia, roles, term.pattern, 0, false);
    } else {
      // Absolute count: every cyclic alignment, with the first slot pinned to
      // the rotation start so each representation is counted exactly once.
      for (int rot = 0; rot < nv; ++rot)
        count += match_linear(dia, roles, term.pattern, rot, true);
    }
    result += term.coeff * count;
  }
  return result;
}

}  // namespace knotstrata
