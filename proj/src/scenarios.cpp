#include "knotstrata/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <stdexcept>

namespace knotstrata {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Compact analytic fixtures
// ---------------------------------------------------------------------------

ParamCurve sampled_compact(int n, int count,
                           const std::function<Vec(double)>& f) {
  std::vector<double> ts(count);
  std::vector<Vec> pts(count);
  for (int i = 0; i < count; ++i) {
    double th = 2.0 * kPi * i / count;
    ts[i] = th;
    pts[i] = f(th);
  }
  return ParamCurve::make_compact(n, ts, pts);
}

Vec v3d(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// Quintic smoothstep: C^2, flat at both ends.
double smooth5(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

}  // namespace

ParamCurve fixture_round_circle() {
  return sampled_compact(3, 64, [](double th) {
    return v3d(0.0, std::cos(th), std::sin(th));
  });
}

ParamCurve fixture_compact_trefoil(bool mirror) {
  double s = mirror ? -1.0 : 1.0;
  return sampled_compact(3, 96, [s](double th) {
    double r = (2.0 + std::cos(3.0 * th)) / 3.0;
    return v3d(s * 0.35 * std::sin(3.0 * th), r * std::cos(2.0 * th),
               r * std::sin(2.0 * th));
  });
}

ParamCurve fixture_compact_figure_eight() {
  return sampled_compact(3, 96, [](double th) {
    double r = (2.0 + std::cos(2.0 * th)) / 3.0;
    return v3d(0.3 * std::sin(4.0 * th), r * std::cos(3.0 * th),
               r * std::sin(3.0 * th));
  });
}

ParamCurve fixture_long_unknot() {
  std::vector<double> ts;
  std::vector<Vec> pts;
  for (double t = -3.0; t <= 3.0 + 1e-12; t += 0.1) {
    double u = t / 2.0;
    double b = (std::abs(u) < 1.0) ? std::pow(1.0 - u * u, 3) : 0.0;
    ts.push_back(t);
    pts.push_back(v3d(0.2 * b, 0.7 * b, t));
  }
  return ParamCurve::make_long(3, ts, pts);
}

ParamCurve fixture_long_trefoil(bool mirror) {
  TrefoilShapeOptions opts;
  opts.mirror = mirror;
  return trefoil_shape(opts);
}

std::vector<std::string> fixture_names() {
  return {"circle",      "trefoil",      "trefoil-mirror",     "figure-eight",
          "long-unknot", "long-trefoil", "long-trefoil-mirror"};
}

ParamCurve fixture_by_name(const std::string& name) {
  if (name == "circle") return fixture_round_circle();
  if (name == "trefoil") return fixture_compact_trefoil(false);
  if (name == "trefoil-mirror") return fixture_compact_trefoil(true);
  if (name == "figure-eight") return fixture_compact_figure_eight();
  if (name == "long-unknot") return fixture_long_unknot();
  if (name == "long-trefoil") return fixture_long_trefoil(false);
  if (name == "long-trefoil-mirror") return fixture_long_trefoil(true);
  throw InputError("unknown fixture: " + name);
}

// ---------------------------------------------------------------------------
// Master long-trefoil shape
// ---------------------------------------------------------------------------

namespace {

struct Waypoint {
  double x, y;        // plane position (east, north)
  double angle_deg;   // pinned plane tangent angle, NaN if free
  double h;           // height in visit units (+-1 at visits)
  bool visit;
};

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Plane layout of the long trefoil: south tail joins at (0,-0.8), north tail
// leaves at (0,7).  Six visits, three crossing points, alternating pattern
// under-over-under-over-under-over along the parameter.
const Waypoint kTrefoilWaypoints[] = {
    {0.000, -0.800, 90.0, 0.00, false},
    {0.050, -0.150, kNaN, 0.20, false},
    {0.280, 0.550, kNaN, 0.45, false},
    {0.575, 1.200, kNaN, 0.60, false},
    {0.869, 1.533, kNaN, 0.45, false},
    {1.150, 1.900, kNaN, -0.30, false},
    {1.210, 1.965, 45.0, -1.00, true},   // visit 1: under at crossing 1
    {1.267, 2.025, kNaN, -0.60, false},
    {1.604, 2.669, kNaN, 0.30, false},
    {1.750, 3.190, 54.0, 1.00, true},    // visit 2: over at crossing 2
    {1.750, 3.450, kNaN, 0.70, false},
    {1.863, 4.000, kNaN, 0.20, false},
    {2.200, 4.150, kNaN, -0.30, false},
    {2.463, 4.035, kNaN, -0.70, false},
    {2.550, 3.975, -45.0, -1.00, true},  // visit 3: under at crossing 3
    {2.634, 3.917, kNaN, -0.60, false},
    {3.309, 2.929, kNaN, 0.20, false},
    {3.100, 2.000, kNaN, 0.55, false},
    {2.150, 1.650, kNaN, 0.80, false},
    {1.210, 1.965, 135.0, 1.00, true},   // visit 4: over at crossing 1
    {1.000, 2.100, kNaN, 0.60, false},
    {0.888, 2.613, kNaN, -0.20, false},
    {1.650, 3.150, kNaN, -0.80, false},
    {1.750, 3.190, 36.0, -1.00, true},   // visit 5: under at crossing 2
    {1.800, 3.200, kNaN, -0.55, false},
    {2.388, 3.713, kNaN, 0.30, false},
    {2.550, 3.975, 45.0, 1.00, true},    // visit 6: over at crossing 3
    {2.950, 4.650, kNaN, 0.55, false},
    {2.300, 5.450, kNaN, 0.35, false},
    {1.000, 5.850, kNaN, 0.20, false},
    {0.120, 6.350, kNaN, 0.08, false},
    {0.000, 7.000, 90.0, 0.00, false},
};

constexpr double kShapeSouthJoin = -0.8;   // parameter/y of the south junction
constexpr double kShapeNorthJoin = 7.0;    // parameter/y of the north junction
constexpr double kShapeWindowLo = -2.0;
constexpr double kShapeWindowHi = 16.0;

// Graded offsets used to taper sample spacing into the tail junctions so the
// interpolating spline settles onto the straight line quickly.
const double kGrade[] = {0.015, 0.03, 0.05, 0.08, 0.13, 0.2,
                         0.3,   0.45, 0.65, 0.9,  1.2};

}  // namespace

MasterShape master_trefoil_shape(const TrefoilShapeOptions& opts) {
  const int W = static_cast<int>(std::size(kTrefoilWaypoints));
  std::vector<Eigen::Vector3d> P(W);  // (x, y, h) in visit units
  for (int i = 0; i < W; ++i)
    P[i] = Eigen::Vector3d(kTrefoilWaypoints[i].x, kTrefoilWaypoints[i].y,
                           kTrefoilWaypoints[i].h);

  // Chordal parameters over the plane projection.
  std::vector<double> t(W, 0.0);
  for (int i = 1; i < W; ++i)
    t[i] = t[i - 1] + (P[i].head<2>() - P[i - 1].head<2>()).norm();
  const double raw_total = t.back();

  // Tangents: Catmull-Rom, with pinned plane directions where prescribed.
  std::vector<Eigen::Vector3d> m(W);
  for (int i = 0; i < W; ++i) {
    int lo = std::max(0, i - 1), hi = std::min(W - 1, i + 1);
    Eigen::Vector3d cr = (P[hi] - P[lo]) / (t[hi] - t[lo]);
    double a = kTrefoilWaypoints[i].angle_deg;
    if (!std::isnan(a)) {
      double rad = a * kPi / 180.0;
      double mag = cr.head<2>().norm();
      cr.head<2>() = mag * Eigen::Vector2d(std::cos(rad), std::sin(rad));
    }
    if (i == 0 || i == W - 1) cr.z() = 0.0;  // flat heights at the junctions
    m[i] = cr;
  }

  // Densely sample the Hermite interpolant.
  std::vector<double> raw_ts;
  std::vector<Eigen::Vector3d> raw_pts;
  std::vector<double> visit_raw;
  for (int i = 0; i + 1 < W; ++i) {
    if (kTrefoilWaypoints[i].visit) visit_raw.push_back(t[i]);
    double dt = t[i + 1] - t[i];
    int k = std::max(2, static_cast<int>(std::ceil(dt / opts.sample_step)));
    for (int j = 0; j < k; ++j) {
      double u = static_cast<double>(j) / k;
      double h00 = (2 * u - 3) * u * u + 1, h10 = ((u - 2) * u + 1) * u;
      double h01 = (3 - 2 * u) * u * u, h11 = (u - 1) * u * u;
      raw_ts.push_back(t[i] + u * dt);
      raw_pts.push_back(h00 * P[i] + h10 * dt * m[i] + h01 * P[i + 1] +
                        h11 * dt * m[i + 1]);
    }
  }
  raw_ts.push_back(t.back());
  raw_pts.push_back(P.back());

  // Interior parameter map: raw chordal [0, raw_total] onto
  // [south_join, north_join] (the junction parameters must equal the junction
  // y-coordinates so the tails satisfy f(t) = t * e_n).
  auto remap = [&](double rt) {
    return kShapeSouthJoin +
           (kShapeNorthJoin - kShapeSouthJoin) * rt / raw_total;
  };

  double hscale = opts.height_amplitude * opts.vertical_scale *
                  (opts.mirror ? -1.0 : 1.0);

  std::vector<double> ts;
  std::vector<Vec> pts;
  // South straight run, graded toward the junction.
  for (int i = static_cast<int>(std::size(kGrade)) - 1; i >= 0; --i) {
    double y = kShapeSouthJoin - kGrade[i];
    if (y < kShapeWindowLo - 1e-12) continue;
    ts.push_back(y);
    pts.push_back(v3d(0.0, 0.0, y));
  }
  if (ts.empty() || ts.front() > kShapeWindowLo + 1e-12) {
    ts.insert(ts.begin(), kShapeWindowLo);
    pts.insert(pts.begin(), v3d(0.0, 0.0, kShapeWindowLo));
  }
  // Curved interior.
  for (size_t i = 0; i < raw_ts.size(); ++i) {
    ts.push_back(remap(raw_ts[i]));
    pts.push_back(v3d(hscale * raw_pts[i].z(), raw_pts[i].x(), raw_pts[i].y()));
  }
  // North straight run, graded away from the junction and extended so the
  // window has room for the loop constructions.
  for (double g : kGrade) {
    ts.push_back(kShapeNorthJoin + g);
    pts.push_back(v3d(0.0, 0.0, kShapeNorthJoin + g));
  }
  for (double y = kShapeNorthJoin + 1.7; y < kShapeWindowHi - 0.4;
       y += (y < 10 ? 0.6 : 1.0)) {
    ts.push_back(y);
    pts.push_back(v3d(0.0, 0.0, y));
  }
  ts.push_back(kShapeWindowHi);
  pts.push_back(v3d(0.0, 0.0, kShapeWindowHi));

  MasterShape out{ParamCurve::make_long(3, ts, pts), {}, 0.0, 0.0};
  for (int i = 0; i < 6; ++i) out.visit_params[i] = remap(visit_raw[i]);
  out.content_center = 0.5 * (kShapeSouthJoin + kShapeNorthJoin);
  out.content_half = 5.2;  // covers the curved content plus straight pads
  return out;
}

ParamCurve trefoil_shape(const TrefoilShapeOptions& opts) {
  return master_trefoil_shape(opts).curve;
}

// ---------------------------------------------------------------------------
// Splice engine: insert scaled copies of the master shape into a base curve
// ---------------------------------------------------------------------------

namespace {

struct SpliceSpec {
  double center;  // parameter of the insertion point on the current base
  double size;    // homothety factor for the inserted content
  double vert;    // extra vertical scaling of the inserted content
};

class SpliceEngine {
 public:
  SpliceEngine(const ParamCurve& master, double rho0, double thalf)
      : master_(master), rho0_(rho0), thalf_(thalf) {}

  ParamCurve build(std::vector<SpliceSpec> splices, double win_lo,
                   double win_hi) const {
    std::sort(splices.begin(), splices.end(),
              [](const SpliceSpec& a, const SpliceSpec& b) {
                return a.size > b.size;
              });
    std::optional<ParamCurve> base;
    for (const auto& sp : splices) base = apply(base, sp, win_lo, win_hi);
    if (!base) {
      std::vector<double> ts{win_lo, 0.25 * win_lo + 0.75 * win_hi, win_hi};
      std::vector<Vec> ps;
      for (double t : ts) ps.push_back(v3d(0, 0, t));
      return ParamCurve::make_long(3, ts, ps);
    }
    return *base;
  }

 private:
  Vec base_eval(const std::optional<ParamCurve>& base, double t,
                int order) const {
    if (base) return base->eval(t, order);
    Vec v = Vec::Zero(3);
    if (order == 0)
      v(2) = t;
    else if (order == 1)
      v(2) = 1.0;
    return v;
  }

  ParamCurve apply(const std::optional<ParamCurve>& base, const SpliceSpec& sp,
                   double win_lo, double win_hi) const {
    const double w = sp.size * thalf_;
    const double c = sp.center;

    // Channel frame: first vector up, second along the horizontal projection
    // of the base tangent, third completing (east when the flow is north).
    Vec d1 = base_eval(base, c, 1);
    Eigen::Vector2d hp(d1(1), d1(2));
    double q = hp.norm();
    if (q < 1e-9)
      throw GenericityError("splice channel tangent is vertical");
    Eigen::Vector2d th = hp / q;
    Vec P = base_eval(base, c, 0);

    // Parameter grid: retained base samples outside the channel, the master
    // knots mapped through the channel, and graded flanks.
    std::vector<double> params;
    if (base) {
      for (double t : base->sample_params())
        if (std::abs(t - c) > w) params.push_back(t);
    } else {
      for (double t = std::min(win_lo, c - w - 0.5); ; t += 0.25) {
        if (std::abs(t - c) > w) params.push_back(t);
        if (t >= std::max(win_hi, c + w + 0.5)) break;
      }
    }
    const double rho_lo = rho0_ - thalf_, rho_hi = rho0_ + thalf_;
    std::vector<double> channel_rho;
    channel_rho.push_back(rho_lo);
    for (double rk : master_.sample_params())
      if (rk > rho_lo + 1e-9 && rk < rho_hi - 1e-9) channel_rho.push_back(rk);
    // The channel may extend slightly past the master's own window; pad with
    // straight-line samples there.
    for (double r = rho_lo + 0.02; r < master_.window_start(); r += 0.05)
      channel_rho.push_back(r);
    channel_rho.push_back(rho_hi);
    std::sort(channel_rho.begin(), channel_rho.end());
    for (double r : channel_rho) params.push_back(c + sp.size * (r - rho0_));
    if (w < 0.5) {
      for (double f : {0.15, 0.4, 1.0}) {
        params.push_back(c - w * (1.0 + f));
        params.push_back(c + w * (1.0 + f));
      }
      for (double f : {0.03, 0.08, 0.2, 0.5}) {
        if (f > 1.5 * w) {
          params.push_back(c - w - f);
          params.push_back(c + w + f);
        }
      }
    }
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end(),
                             [](double a, double b) {
                               return std::abs(a - b) < 1e-9;
                             }),
                 params.end());

    std::vector<Vec> values;
    values.reserve(params.size());
    for (double tau : params) {
      double r = (tau - c) / w;
      if (std::abs(r) >= 1.0) {
        values.push_back(base_eval(base, tau, 0));
        continue;
      }
      double rho = rho0_ + (tau - c) / sp.size;
      Vec K = master_.eval(rho);
      double sq = sp.size * q;
      Vec val(3);
      double flow = K(2) - rho0_;  // content flow coordinate
      double east = K(1);
      val(0) = P(0) + sq * sp.vert * K(0);
      val(1) = P(1) + sq * (flow * th(0) + east * th(1));
      val(2) = P(2) + sq * (flow * th(1) - east * th(0));
      double ar = std::abs(r);
      if (ar > 0.85) {
        double beta = smooth5((ar - 0.85) / 0.15);
        Vec line(3);
        line(0) = P(0);
        line(1) = P(1) + q * (tau - c) * th(0);
        line(2) = P(2) + q * (tau - c) * th(1);
        Vec mismatch = base_eval(base, tau, 0) - line;
        val += beta * mismatch;
      }
      values.push_back(val);
    }
    return ParamCurve::make_long(3, params, values);
  }

  const ParamCurve& master_;
  double rho0_, thalf_;
};

// Smooth monotone transport schedule: c(u) with dc/du proportional to
// 1/weight(c), slowing down inside the passage windows.
class TransportSchedule {
 public:
  TransportSchedule(double c0, double c1, std::array<double, 6> passages,
                    double window, double amp)
      : c0_(c0), c1_(c1), passages_(passages), wp_(window), amp_(amp) {
    total_ = cum(c1_);
  }

  double weight(double cc) const {
    double w = 1.0;
    for (double p : passages_) {
      double z = (cc - p) / wp_;
      w += amp_ * std::exp(-0.5 * z * z);
    }
    return w;
  }

  // cumulative integral of the weight from c0 to cc (analytic via erf)
  double cum(double cc) const {
    double s = cc - c0_;
    const double k = wp_ * std::sqrt(kPi / 2.0);
    for (double p : passages_)
      s += amp_ * k *
           (std::erf((cc - p) / (wp_ * std::sqrt(2.0))) -
            std::erf((c0_ - p) / (wp_ * std::sqrt(2.0))));
    return s;
  }

  double position(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    double target = u * total_;
    double lo = c0_, hi = c1_;
    double cc = c0_ + u * (c1_ - c0_);
    for (int it = 0; it < 60; ++it) {
      double f = cum(cc) - target;
      if (f > 0)
        hi = cc;
      else
        lo = cc;
      double step = f / weight(cc);
      double next = cc - step;
      if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
      if (std::abs(next - cc) < 1e-13 * std::max(1.0, std::abs(cc))) {
        cc = next;
        break;
      }
      cc = next;
    }
    return cc;
  }

 private:
  double c0_, c1_;
  std::array<double, 6> passages_;
  double wp_, amp_;
  double total_;
};

double geo_interp(double a, double b, double g) {
  return std::exp((1.0 - g) * std::log(a) + g * std::log(b));
}

}  // namespace

std::array<double, 6> bead_loop_passages(const BeadLoopOptions& opts) {
  TrefoilShapeOptions so;
  so.height_amplitude = opts.height_amplitude;
  so.sample_step = opts.sample_step;
  return master_trefoil_shape(so).visit_params;
}

KnotCycle bead_transport_loop(const BeadLoopOptions& opts) {
  TrefoilShapeOptions so;
  so.height_amplitude = opts.height_amplitude;
  so.sample_step = opts.sample_step;
  MasterShape master = master_trefoil_shape(so);

  const double eps2 = opts.eps * opts.eps;
  const double eps3 = eps2 * opts.eps;
  const double c_home = -1.4;
  const double c_end = 11.5;
  const double native = master.content_center;
  const bool alt = (opts.variant == 2);

  const double tf = alt ? 0.70 : opts.transport_fraction;
  const double wp = (alt ? 1.3 : 1.0) * opts.passage_window;
  const double amp = (alt ? 1.7 : 1.0) * opts.passage_weight;
  const double span = c_end - c_home;

  TransportSchedule sched(c_home, c_end, master.visit_params, wp, amp);

  CycleDomain dom;
  dom.kind = DomainKind::kCircle;
  dom.coord_dim = 1;
  dom.period = 1.0;
  dom.grid = {opts.frames};

  auto gen = [master, sched, eps2, eps3, c_home, c_end, native, tf, alt,
              span](const Vec& u) -> ParamCurve {
    double s = u(0) - std::floor(u(0));
    SpliceEngine engine(master.curve, native, master.content_half);
    std::vector<SpliceSpec> sp;
    if (s < tf) {
      double cs = sched.position(s / tf);
      double sigma = eps3;
      if (alt) {
        double b = std::sin(kPi * (cs - c_home) / span);
        sigma = eps3 * (1.0 - 0.35 * b * b);
      }
      sp.push_back({native, 1.0, eps2});
      sp.push_back({cs, sigma, 1.0});
    } else {
      double r = (s - tf) / (1.0 - tf) * 6.0;
      int stage = std::min(5, static_cast<int>(std::floor(r)));
      double g = smooth5(r - stage);
      switch (stage) {
        case 0:  // grow the bead to full size on the north straight run
          sp.push_back({native, 1.0, eps2});
          sp.push_back({c_end, geo_interp(eps3, 1.0, g), 1.0});
          break;
        case 1:  // flatten the grown copy
          sp.push_back({native, 1.0, eps2});
          sp.push_back({c_end, 1.0, geo_interp(1.0, eps2, g)});
          break;
        case 2:  // inflate the native copy back to full height
          sp.push_back({native, 1.0, geo_interp(eps2, 1.0, g)});
          sp.push_back({c_end, 1.0, eps2});
          break;
        case 3:  // shrink the native copy to bead size
          sp.push_back({native, geo_interp(1.0, eps3, g), 1.0});
          sp.push_back({c_end, 1.0, eps2});
          break;
        case 4:  // slide the tiny bead south to its home position
          sp.push_back({native + g * (c_home - native), eps3, 1.0});
          sp.push_back({c_end, 1.0, eps2});
          break;
        default:  // slide the flattened copy into the native position
          sp.push_back({c_home, eps3, 1.0});
          sp.push_back({c_end + g * (native - c_end), 1.0, eps2});
          break;
      }
    }
    return engine.build(sp, -2.0, 16.0);
  };

  return KnotCycle(dom, 3, CurveKind::kLong, gen);
}

// ---------------------------------------------------------------------------
// Analytic families
// ---------------------------------------------------------------------------

namespace {

Eigen::Matrix3d quat_to_rot(const Eigen::Vector4d& q) {
  double w = q(0), x = q(1), y = q(2), z = q(3);
  Eigen::Matrix3d R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

}  // namespace

KnotCycle great_circle_cycle() {
  CycleDomain dom;
  dom.kind = DomainKind::kSO3;
  dom.coord_dim = 4;
  dom.grid = {5};
  auto gen = [](const Vec& u) -> ParamCurve {
    Eigen::Vector4d q(u(0), u(1), u(2), u(3));
    double nq = q.norm();
    if (nq < 1e-9) throw InputError("degenerate quaternion");
    Eigen::Matrix3d R = quat_to_rot(q / nq);
    return sampled_compact(3, 48, [&R](double th) {
      Eigen::Vector3d p = R * Eigen::Vector3d(0.0, std::cos(th), std::sin(th));
      return v3d(p(0), p(1), p(2));
    });
  };
  return KnotCycle(dom, 3, CurveKind::kCompact, gen);
}

KnotCycle hopf_fiber_cycle() {
  CycleDomain dom;
  dom.kind = DomainKind::kS3;
  dom.coord_dim = 4;
  dom.grid = {5};
  auto gen = [](const Vec& u) -> ParamCurve {
    Eigen::Vector4d q(u(0), u(1), u(2), u(3));
    double nq = q.norm();
    if (nq < 1e-9) throw InputError("degenerate quaternion");
    q /= nq;
    return sampled_compact(4, 48, [&q](double th) {
      double cth = std::cos(th), sth = std::sin(th);
      Vec p(4);
      p(0) = cth * q(0) - sth * q(1);
      p(1) = cth * q(1) + sth * q(0);
      p(2) = cth * q(2) - sth * q(3);
      p(3) = cth * q(3) + sth * q(2);
      return p;
    });
  };
  return KnotCycle(dom, 4, CurveKind::kCompact, gen);
}

KnotCycle rotation_wobble_loop(const ParamCurve& base, double amplitude,
                               double phase, double taper_margin) {
  if (base.n() != 3) throw InputError("wobble loop requires n = 3");
  CycleDomain dom;
  dom.kind = DomainKind::kCircle;
  dom.coord_dim = 1;
  dom.period = 1.0;
  dom.grid = {256};

  std::vector<double> ts = base.sample_params();
  std::vector<Vec> pts = unstack_rows(base.sample_points());
  bool is_long = base.is_long();
  double t0 = is_long ? base.window_start() : 0.0;
  double t1 = is_long ? base.window_end() : 0.0;

  auto gen = [=](const Vec& u) -> ParamCurve {
    double alpha = amplitude * std::sin(2.0 * kPi * u(0) + phase);
    std::vector<Vec> rotated(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
      double w = 1.0;
      if (is_long) {
        double din = (ts[i] - t0) / taper_margin;
        double dout = (t1 - ts[i]) / taper_margin;
        w = smooth5(din) * smooth5(dout);
      }
      double a = alpha * w, ca = std::cos(a), sa = std::sin(a);
      Vec p = pts[i];
      double x2 = p(1), x3 = p(2);
      Vec r(3);
      r << p(0), ca * x2 - sa * x3, sa * x2 + ca * x3;
      rotated[i] = r;
    }
    return is_long ? ParamCurve::make_long(3, ts, rotated)
                   : ParamCurve::make_compact(3, ts, rotated);
  };
  return KnotCycle(dom, 3, base.kind(), gen);
}

ParamCurve bump_perturb(const ParamCurve& base, const Vec& center,
                        double radius, const Vec& direction) {
  std::vector<double> ts = base.sample_params();
  std::vector<Vec> pts = unstack_rows(base.sample_points());
  for (auto& p : pts) {
    double u = (p - center).norm() / radius;
    if (u < 1.0) {
      double b = std::pow(1.0 - u * u, 3);
      p += b * direction;
    }
  }
  return base.is_long() ? ParamCurve::make_long(base.n(), ts, pts)
                        : ParamCurve::make_compact(base.n(), ts, pts);
}

}  // namespace knotstrata
