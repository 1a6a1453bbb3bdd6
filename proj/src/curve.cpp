#include "knotstrata/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace knotstrata {

namespace {

// Thomas algorithm for a tridiagonal system; diagonals (a = sub, b = main,
// c = super), rhs is (#rows) x dim.  Overwrites nothing; returns solution.
Mat solve_tridiagonal(std::vector<double> a, std::vector<double> b,
                      std::vector<double> c, Mat rhs) {
  const int n = static_cast<int>(b.size());
  for (int i = 1; i < n; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    rhs.row(i) -= w * rhs.row(i - 1);
  }
  Mat x(n, rhs.cols());
  x.row(n - 1) = rhs.row(n - 1) / b[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    x.row(i) = (rhs.row(i) - c[i] * x.row(i + 1)) / b[i];
  }
  return x;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

CubicSpline CubicSpline::clamped(std::vector<double> knots, Mat values,
                                 const Vec& deriv_start, const Vec& deriv_end) {
  const int n = static_cast<int>(knots.size());
  if (n < 3) throw InputError("spline needs at least 3 samples");
  if (values.rows() != n) throw InputError("sample count mismatch");
  for (int i = 0; i + 1 < n; ++i) {
    if (!(knots[i] < knots[i + 1]))
      throw InputError("sample parameters must be strictly increasing");
  }

  std::vector<double> sub(n, 0.0), dia(n, 0.0), sup(n, 0.0);
  Mat rhs = Mat::Zero(n, values.cols());
  auto h = [&](int i) { return knots[i + 1] - knots[i]; };
  auto dy = [&](int i) { return (values.row(i + 1) - values.row(i)) / h(i); };

  dia[0] = h(0) / 3.0;
  sup[0] = h(0) / 6.0;
  rhs.row(0) = dy(0) - deriv_start.transpose();
  for (int i = 1; i + 1 < n; ++i) {
    sub[i] = h(i - 1) / 6.0;
    dia[i] = (h(i - 1) + h(i)) / 3.0;
    sup[i] = h(i) / 6.0;
    rhs.row(i) = dy(i) - dy(i - 1);
  }
  sub[n - 1] = h(n - 2) / 6.0;
  dia[n - 1] = h(n - 2) / 3.0;
  rhs.row(n - 1) = deriv_end.transpose() - dy(n - 2);

  CubicSpline s;
  s.moments = solve_tridiagonal(sub, dia, sup, rhs);
  s.knots = std::move(knots);
  s.values = std::move(values);
  return s;
}

CubicSpline CubicSpline::make_periodic(std::vector<double> knots, Mat values,
                                       double period) {
  const int n = static_cast<int>(knots.size());
  if (n < 4) throw InputError("periodic spline needs at least 4 samples");
  if (values.rows() != n) throw InputError("sample count mismatch");
  for (int i = 0; i + 1 < n; ++i) {
    if (!(knots[i] < knots[i + 1]))
      throw InputError("sample parameters must be strictly increasing");
  }
  if (!(knots.back() - knots.front() < period))
    throw InputError("samples must span less than one period");

  // Cyclic tridiagonal system for the moments, solved by the
  // Sherman-Morrison correction of a plain tridiagonal solve.
  auto h = [&](int i) {
    return i + 1 < n ? knots[i + 1] - knots[i]
                     : period - knots[n - 1] + knots[0];
  };
  auto yrow = [&](int i) { return values.row(((i % n) + n) % n); };
  auto dy = [&](int i) { return (yrow(i + 1) - yrow(i)) / h(i); };

  std::vector<double> sub(n), dia(n), sup(n);
  Mat rhs = Mat::Zero(n, values.cols());
  for (int i = 0; i < n; ++i) {
    int im = (i + n - 1) % n;
    sub[i] = h(im) / 6.0;
    dia[i] = (h(im) + h(i)) / 3.0;
    sup[i] = h(i) / 6.0;
    rhs.row(i) = dy(i) - dy(im);
  }

  // Corner entries: row 0 couples to n-1 with sub[0], row n-1 couples to 0
  // with sup[n-1].  Write A = T + u v^T with u = (gamma, 0, .., beta_adj)...
  // Use the standard formulation: choose gamma = -dia[0].
  double alpha = sub[0];      // A(0, n-1)
  double beta = sup[n - 1];   // A(n-1, 0)
  double gamma = -dia[0];
  std::vector<double> dia2 = dia;
  dia2[0] -= gamma;
  dia2[n - 1] -= alpha * beta / gamma;
  std::vector<double> sub2 = sub, sup2 = sup;
  sub2[0] = 0.0;
  sup2[n - 1] = 0.0;

  Mat x1 = solve_tridiagonal(sub2, dia2, sup2, rhs);
  Mat uvec = Mat::Zero(n, 1);
  uvec(0, 0) = gamma;
  uvec(n - 1, 0) = beta;
  Mat x2 = solve_tridiagonal(sub2, dia2, sup2, uvec);

  // v = (1, 0, ..., alpha/gamma)
  Eigen::RowVectorXd vx1 = x1.row(0) + (alpha / gamma) * x1.row(n - 1);
  double vx2 = x2(0, 0) + (alpha / gamma) * x2(n - 1, 0);
  Mat moments = x1 - x2 * (vx1 / (1.0 + vx2));

  CubicSpline s;
  s.knots = std::move(knots);
  s.values = std::move(values);
  s.moments = std::move(moments);
  s.periodic = true;
  s.period = period;
  return s;
}

int CubicSpline::segment_index(double t) const {
  const int n = static_cast<int>(knots.size());
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  int idx = static_cast<int>(it - knots.begin()) - 1;
  if (idx < 0) idx = 0;
  if (idx > n - 2 && !periodic) idx = n - 2;
  if (periodic && idx > n - 1) idx = n - 1;
  return idx;
}

Vec CubicSpline::eval(double t, int order) const {
  const int n = static_cast<int>(knots.size());
  double tt = t;
  if (periodic) {
    double base = knots[0];
    tt = std::fmod(t - base, period);
    if (tt < 0) tt += period;
    tt += base;
  }
  int i = segment_index(tt);
  int j = (i + 1) % n;
  double ti = knots[i];
  double tj = (i + 1 < n) ? knots[i + 1] : knots[n - 1] + (period - knots[n - 1] + knots[0]);
  double h = tj - ti;
  double u = tt - ti;       // distance from left knot
  double w = tj - tt;       // distance from right knot
  Eigen::RowVectorXd Mi = moments.row(i), Mj = moments.row(j);
  Eigen::RowVectorXd yi = values.row(i), yj = values.row(j);

  Eigen::RowVectorXd out;
  switch (order) {
    case 0:
      out = Mi * (w * w * w) / (6.0 * h) + Mj * (u * u * u) / (6.0 * h) +
            (yi - Mi * h * h / 6.0) * (w / h) + (yj - Mj * h * h / 6.0) * (u / h);
      break;
    case 1:
      out = -Mi * (w * w) / (2.0 * h) + Mj * (u * u) / (2.0 * h) +
            (yj - yi) / h - (Mj - Mi) * h / 6.0;
      break;
    case 2:
      out = Mi * (w / h) + Mj * (u / h);
      break;
    case 3:
      out = (Mj - Mi) / h;
      break;
    default:
      throw InputError("derivative order must be 0..3");
  }
  return out.transpose();
}

ParamCurve ParamCurve::make_long(int n, const std::vector<double>& ts,
                                 const Mat& pts) {
  if (n < 3) throw InputError("ambient dimension must be >= 3");
  if (static_cast<int>(ts.size()) < 4)
    throw InputError("long curve needs at least 4 samples");
  if (pts.rows() != static_cast<int>(ts.size()) || pts.cols() != n)
    throw InputError("sample matrix must be (#params) x n");

  Mat v = pts;
  // The first and last samples must sit on the standard line t * e_n.
  const double snap_tol = 1e-7;
  for (int which : {0, static_cast<int>(ts.size()) - 1}) {
    Vec expect = Vec::Zero(n);
    expect(n - 1) = ts[which];
    if ((v.row(which).transpose() - expect).norm() > snap_tol * (1.0 + std::abs(ts[which])))
      throw InputError("long curve boundary samples must lie on the standard line");
    v.row(which) = expect.transpose();
  }
  Vec tail = Vec::Zero(n);
  tail(n - 1) = 1.0;

  ParamCurve c;
  c.n_ = n;
  c.kind_ = CurveKind::kLong;
  c.t0_ = ts.front();
  c.t1_ = ts.back();
  c.spline_ = CubicSpline::clamped(ts, std::move(v), tail, tail);
  return c;
}

ParamCurve ParamCurve::make_compact(int n, const std::vector<double>& ts,
                                    const Mat& pts) {
  if (n < 3) throw InputError("ambient dimension must be >= 3");
  if (pts.rows() != static_cast<int>(ts.size()) || pts.cols() != n)
    throw InputError("sample matrix must be (#params) x n");
  if (ts.empty() || ts.front() < 0.0 || ts.back() >= 2.0 * M_PI)
    throw InputError("compact curve samples must lie in [0, 2*pi)");

  ParamCurve c;
  c.n_ = n;
  c.kind_ = CurveKind::kCompact;
  c.t0_ = 0.0;
  c.t1_ = 2.0 * M_PI;
  c.spline_ = CubicSpline::make_periodic(ts, pts, 2.0 * M_PI);
  return c;
}

double ParamCurve::wrap(double t) const {
  if (kind_ != CurveKind::kCompact) return t;
  double w = std::fmod(t, 2.0 * M_PI);
  if (w < 0) w += 2.0 * M_PI;
  return w;
}

Vec ParamCurve::eval(double t, int order) const {
  if (order < 0 || order > 3) throw InputError("derivative order must be 0..3");
  if (kind_ == CurveKind::kLong && (t < t0_ || t > t1_)) {
    Vec out = Vec::Zero(n_);
    if (order == 0) out(n_ - 1) = t;
    if (order == 1) out(n_ - 1) = 1.0;
    return out;
  }
  return spline_.eval(t, order);
}

// ---------------------------------------------------------------------------
// Polyline machinery: sampling, a bounding-box hierarchy over the segments,
// self-intersection candidates, and minimum strand distance.
// ---------------------------------------------------------------------------

namespace {

struct Polyline {
  std::vector<double> params;  // strictly increasing, size N+1
  Mat pts;                     // (N+1) x d points (plane or ambient)
  bool cyclic = false;         // segment N-1 is adjacent to segment 0
  int segments() const { return static_cast<int>(params.size()) - 1; }
};

Polyline sample_polyline(const ParamCurve& c, int oversample, bool planar) {
  const auto& knots = c.sample_params();
  const int nk = static_cast<int>(knots.size());
  std::vector<double> params;
  const bool compact = c.kind() == CurveKind::kCompact;
  const int nseg = compact ? nk : nk - 1;
  params.reserve(static_cast<size_t>(nseg) * oversample + 1);
  for (int i = 0; i < nseg; ++i) {
    double a = knots[i];
    double b = (i + 1 < nk) ? knots[i + 1] : knots[0] + 2.0 * M_PI;
    for (int k = 0; k < oversample; ++k)
      params.push_back(a + (b - a) * k / oversample);
  }
  params.push_back(compact ? knots[0] + 2.0 * M_PI : knots[nk - 1]);

  const int d = planar ? c.n() - 1 : c.n();
  Mat pts(static_cast<int>(params.size()), d);
  for (size_t i = 0; i < params.size(); ++i) {
    Vec p = c.point(params[i]);
    pts.row(static_cast<int>(i)) = planar ? project(p).transpose() : p.transpose();
  }
  Polyline poly;
  poly.params = std::move(params);
  poly.pts = std::move(pts);
  poly.cyclic = compact;
  return poly;
}

struct Bvh {
  struct Node {
    int lo, hi;             // segment index range [lo, hi)
    int left = -1, right = -1;
    Vec bmin, bmax;
  };
  std::vector<Node> nodes;
  const Polyline* poly = nullptr;

  int build(int lo, int hi) {
    Node node;
    node.lo = lo;
    node.hi = hi;
    const int d = static_cast<int>(poly->pts.cols());
    node.bmin = Vec::Constant(d, std::numeric_limits<double>::infinity());
    node.bmax = Vec::Constant(d, -std::numeric_limits<double>::infinity());
    for (int s = lo; s < hi; ++s) {
      for (int e = 0; e < 2; ++e) {
        Vec p = poly->pts.row(s + e).transpose();
        node.bmin = node.bmin.cwiseMin(p);
        node.bmax = node.bmax.cwiseMax(p);
      }
    }
    int idx = static_cast<int>(nodes.size());
    nodes.push_back(node);
    if (hi - lo > 8) {
      int mid = (lo + hi) / 2;
      int l = build(lo, mid);
      int r = build(mid, hi);
      nodes[idx].left = l;
      nodes[idx].right = r;
    }
    return idx;
  }

  static bool boxes_overlap(const Node& a, const Node& b, double pad) {
    for (int i = 0; i < a.bmin.size(); ++i) {
      if (a.bmin(i) > b.bmax(i) + pad || b.bmin(i) > a.bmax(i) + pad)
        return false;
    }
    return true;
  }

  static double box_distance(const Node& a, const Node& b) {
    double d2 = 0.0;
    for (int i = 0; i < a.bmin.size(); ++i) {
      double gap = std::max({0.0, a.bmin(i) - b.bmax(i), b.bmin(i) - a.bmax(i)});
      d2 += gap * gap;
    }
    return std::sqrt(d2);
  }
};

bool segments_adjacent(const Polyline& poly, int i, int j) {
  if (i == j) return true;
  if (std::abs(i - j) == 1) return true;
  if (poly.cyclic && (i == 0 && j == poly.segments() - 1)) return true;
  if (poly.cyclic && (j == 0 && i == poly.segments() - 1)) return true;
  return false;
}

// Proper 2D segment intersection with generous slack; returns interpolation
// fractions u, v in [-slack, 1+slack] when the supporting lines cross nearby.
bool segment_cross_2d(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                      const Eigen::Vector2d& b0, const Eigen::Vector2d& b1,
                      double* u_out, double* v_out) {
  Eigen::Vector2d d1 = a1 - a0, d2 = b1 - b0;
  double denom = cross2(d1, d2);
  double scale = d1.norm() * d2.norm();
  if (std::abs(denom) < 1e-14 * (scale + 1e-300)) return false;
  Eigen::Vector2d r = b0 - a0;
  double u = cross2(r, d2) / denom;
  double v = cross2(r, d1) / denom;
  const double slack = 0.25;
  if (u < -slack || u > 1.0 + slack || v < -slack || v > 1.0 + slack)
    return false;
  *u_out = u;
  *v_out = v;
  return true;
}

// Minimum distance between two segments in R^d and the local fractions.
double segment_distance(const Vec& a0, const Vec& a1, const Vec& b0,
                        const Vec& b1) {
  Vec d1 = a1 - a0, d2 = b1 - b0, r = a0 - b0;
  double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  const double tiny = 1e-30;
  if (a <= tiny && e <= tiny) return r.norm();
  if (a <= tiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    double c = d1.dot(r);
    if (e <= tiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      double b = d1.dot(d2);
      double denom = a * e - b * b;
      if (denom > tiny) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (a0 + s * d1 - (b0 + t * d2)).norm();
}

struct CandidatePair {
  int seg_a, seg_b;
  double u, v;
};

std::vector<CandidatePair> self_intersection_candidates(const Polyline& poly) {
  Bvh bvh;
  bvh.poly = &poly;
  bvh.nodes.reserve(2 * poly.segments() / 8 + 4);
  int root = bvh.build(0, poly.segments());

  std::vector<CandidatePair> out;
  std::vector<std::pair<int, int>> stack;
  stack.emplace_back(root, root);
  while (!stack.empty()) {
    auto [ia, ib] = stack.back();
    stack.pop_back();
    const auto& na = bvh.nodes[ia];
    const auto& nb = bvh.nodes[ib];
    if (!Bvh::boxes_overlap(na, nb, 0.0)) continue;
    bool leaf_a = na.left < 0, leaf_b = nb.left < 0;
    if (!leaf_a || !leaf_b) {
      if (ia == ib) {
        stack.emplace_back(na.left, na.left);
        stack.emplace_back(na.right, na.right);
        stack.emplace_back(na.left, na.right);
      } else if (!leaf_a && (leaf_b || (na.hi - na.lo) >= (nb.hi - nb.lo))) {
        stack.emplace_back(na.left, ib);
        stack.emplace_back(na.right, ib);
      } else {
        stack.emplace_back(ia, nb.left);
        stack.emplace_back(ia, nb.right);
      }
      continue;
    }
    for (int i = na.lo; i < na.hi; ++i) {
      int jstart = (ia == ib) ? i + 1 : nb.lo;
      for (int j = jstart; j < nb.hi; ++j) {
        int lo = std::min(i, j), hi = std::max(i, j);
        if (segments_adjacent(poly, lo, hi)) continue;
        double u, v;
        Eigen::Vector2d a0 = poly.pts.row(lo).transpose();
        Eigen::Vector2d a1 = poly.pts.row(lo + 1).transpose();
        Eigen::Vector2d b0 = poly.pts.row(hi).transpose();
        Eigen::Vector2d b1 = poly.pts.row(hi + 1).transpose();
        if (segment_cross_2d(a0, a1, b0, b1, &u, &v))
          out.push_back({lo, hi, u, v});
      }
    }
  }
  return out;
}

// Minimum distance between parameter-separated strands.  A pair of segments
// counts only when the arc length between them exceeds reach_factor times
// their spatial distance, which removes trivially-near neighbors along the
// curve while keeping genuine strand-to-strand approaches at any scale.
double min_strand_distance(const Polyline& poly, double reach_factor) {
  const int nseg = poly.segments();
  std::vector<double> arc(nseg + 1, 0.0);
  for (int i = 0; i < nseg; ++i) {
    arc[i + 1] =
        arc[i] + (poly.pts.row(i + 1) - poly.pts.row(i)).norm();
  }
  double total_arc = arc[nseg];

  Bvh bvh;
  bvh.poly = &poly;
  int root = bvh.build(0, nseg);
  double best = std::numeric_limits<double>::infinity();

  std::vector<std::pair<int, int>> stack;
  stack.emplace_back(root, root);
  while (!stack.empty()) {
    auto [ia, ib] = stack.back();
    stack.pop_back();
    const auto& na = bvh.nodes[ia];
    const auto& nb = bvh.nodes[ib];
    if (Bvh::box_distance(na, nb) >= best) continue;
    bool leaf_a = na.left < 0, leaf_b = nb.left < 0;
    if (!leaf_a || !leaf_b) {
      if (ia == ib) {
        stack.emplace_back(na.left, na.left);
        stack.emplace_back(na.right, na.right);
        stack.emplace_back(na.left, na.right);
      } else if (!leaf_a && (leaf_b || (na.hi - na.lo) >= (nb.hi - nb.lo))) {
        stack.emplace_back(na.left, ib);
        stack.emplace_back(na.right, ib);
      } else {
        stack.emplace_back(ia, nb.left);
        stack.emplace_back(ia, nb.right);
      }
      continue;
    }
    for (int i = na.lo; i < na.hi; ++i) {
      int jstart = (ia == ib) ? i + 1 : nb.lo;
      for (int j = jstart; j < nb.hi; ++j) {
        int lo = std::min(i, j), hi = std::max(i, j);
        if (segments_adjacent(poly, lo, hi)) continue;
        double d = segment_distance(
            poly.pts.row(lo).transpose(), poly.pts.row(lo + 1).transpose(),
            poly.pts.row(hi).transpose(), poly.pts.row(hi + 1).transpose());
        double gap = arc[hi] - arc[lo + 1];
        if (poly.cyclic) gap = std::min(gap, total_arc - (arc[hi + 1] - arc[lo]));
        if (gap > reach_factor * d && d < best) best = d;
      }
    }
  }
  return best;
}

struct RefineResult {
  bool ok = false;
  double s = 0.0, t = 0.0;
  Eigen::Vector2d where;
};

// Damped 2x2 Newton polish of a plane coincidence p f(s) = p f(t).
RefineResult refine_crossing(const ParamCurve& c, double s0, double t0,
                             double tol) {
  RefineResult res;
  double s = s0, t = t0;
  auto residual = [&](double ss, double tt) -> Eigen::Vector2d {
    return (c.plane_point(ss) - c.plane_point(tt)).head<2>();
  };
  Eigen::Vector2d F = residual(s, t);
  for (int iter = 0; iter < 40; ++iter) {
    if (F.norm() <= tol) break;
    Eigen::Vector2d ds = c.plane_tangent(s).head<2>();
    Eigen::Vector2d dt = c.plane_tangent(t).head<2>();
    Eigen::Matrix2d J;
    J.col(0) = ds;
    J.col(1) = -dt;
    double det = J.determinant();
    if (std::abs(det) < 1e-300) return res;
    Eigen::Vector2d step = J.inverse() * (-F);
    double lambda = 1.0;
    for (int back = 0; back < 25; ++back) {
      Eigen::Vector2d Fn = residual(s + lambda * step(0), t + lambda * step(1));
      if (Fn.norm() < F.norm() || Fn.norm() <= tol) {
        s += lambda * step(0);
        t += lambda * step(1);
        F = Fn;
        break;
      }
      lambda *= 0.5;
      if (back == 24) return res;
    }
  }
  if (F.norm() > tol) return res;
  res.ok = true;
  res.s = s;
  res.t = t;
  res.where = c.plane_point(s).head<2>();
  return res;
}

}  // namespace

std::vector<Crossing> find_crossings(const ParamCurve& curve,
                                     const CrossingOptions& opts) {
  if (curve.n() != 3)
    throw InputError("plane crossings are only defined for n == 3");

  Polyline poly = sample_polyline(curve, opts.oversample, /*planar=*/true);
  auto candidates = self_intersection_candidates(poly);

  const bool compact = curve.kind() == CurveKind::kCompact;
  const double domain_lo = compact ? -1e18 : curve.window_start();
  const double domain_hi = compact ? 1e18 : curve.window_end();

  std::vector<Crossing> found;
  for (const auto& cand : candidates) {
    double s0 = poly.params[cand.seg_a] +
                std::clamp(cand.u, 0.0, 1.0) *
                    (poly.params[cand.seg_a + 1] - poly.params[cand.seg_a]);
    double t0 = poly.params[cand.seg_b] +
                std::clamp(cand.v, 0.0, 1.0) *
                    (poly.params[cand.seg_b + 1] - poly.params[cand.seg_b]);
    RefineResult r = refine_crossing(curve, s0, t0, opts.newton_tol);
    if (!r.ok) continue;
    double s = r.s, t = r.t;
    if (compact) {
      s = curve.wrap(s);
      t = curve.wrap(t);
    }
    if (s < domain_lo - 1e-12 || s > domain_hi + 1e-12 || t < domain_lo - 1e-12 ||
        t > domain_hi + 1e-12)
      continue;
    if (s > t) std::swap(s, t);
    double sep = t - s;
    if (compact) sep = std::min(sep, 2.0 * M_PI - sep);
    if (sep < 1e-9) continue;  // converged onto a single point, not a crossing

    Crossing x;
    x.s = s;
    x.t = t;
    x.where = curve.plane_point(s).head<2>();
    found.push_back(x);
  }

  std::sort(found.begin(), found.end(), [](const Crossing& a, const Crossing& b) {
    return a.s != b.s ? a.s < b.s : a.t < b.t;
  });
  std::vector<Crossing> dedup;
  for (const auto& x : found) {
    bool seen = false;
    for (const auto& y : dedup) {
      if (std::abs(x.s - y.s) < opts.dedup_radius &&
          std::abs(x.t - y.t) < opts.dedup_radius) {
        seen = true;
        break;
      }
    }
    if (!seen) dedup.push_back(x);
  }

  // Classification and genericity screening.
  for (auto& x : dedup) {
    Eigen::Vector2d ds = curve.plane_tangent(x.s).head<2>();
    Eigen::Vector2d dt = curve.plane_tangent(x.t).head<2>();
    double det = cross2(ds, dt);
    double scale = ds.norm() * dt.norm();
    if (scale < 1e-300 || std::abs(det) / scale < 1.0 / opts.cond_threshold) {
      if (opts.throw_on_degenerate)
        throw GenericityError("tangential (non-transverse) crossing at s=" +
                              std::to_string(x.s));
      continue;
    }
    x.sign = det > 0 ? 1 : -1;
    double gap = height_gap(curve.point(x.s), curve.point(x.t));
    if (std::abs(gap) < opts.margin_tol) {
      if (opts.throw_on_degenerate)
        throw GenericityError("height tie at crossing s=" + std::to_string(x.s) +
                              " t=" + std::to_string(x.t));
      continue;
    }
    x.over_is_s = gap > 0;
    x.height_gap = std::abs(gap);
  }

  // Triple points (two crossings at one plane location) are not generic for
  // a single curve.
  for (size_t i = 0; i < dedup.size(); ++i) {
    for (size_t j = i + 1; j < dedup.size(); ++j) {
      if ((dedup[i].where - dedup[j].where).norm() < opts.triple_radius) {
        if (opts.throw_on_degenerate)
          throw GenericityError("triple point in projection near s=" +
                                std::to_string(dedup[i].s));
      }
    }
  }
  return dedup;
}

GenericityReport genericity_report(const ParamCurve& curve,
                                   const CrossingOptions& opts) {
  GenericityReport rep;
  Polyline body = sample_polyline(curve, opts.oversample, /*planar=*/false);
  rep.min_strand_distance = min_strand_distance(body, 3.0);
  if (rep.min_strand_distance < 1e-12) {
    rep.errors.push_back({"curve is not embedded (self-intersection)", 0, 0});
  }
  if (curve.n() == 3) {
    try {
      CrossingOptions o = opts;
      o.throw_on_degenerate = true;
      auto xs = find_crossings(curve, o);
      rep.crossing_count = static_cast<int>(xs.size());
    } catch (const GenericityError& e) {
      rep.errors.push_back({e.what(), 0, 0});
    }
  }
  rep.clean = rep.errors.empty();
  return rep;
}

}  // namespace knotstrata
