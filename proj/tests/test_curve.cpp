// Spline curves and crossing detection: derivative accuracy against finite
// differences, exact tails and periodicity, a brute-force all-pairs crossing
// oracle, hand-computed sign fixtures, genericity failures, and input errors.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "knotstrata/curve.hpp"
#include "knotstrata/gauss.hpp"
#include "knotstrata/scenarios.hpp"

namespace knotstrata {
namespace {

// --- construction helpers ----------------------------------------------------

ParamCurve analytic_trefoil(int samples, double height = 0.35) {
  std::vector<double> ts;
  Mat pts(samples, 3);
  for (int i = 0; i < samples; ++i) {
    const double th = 2.0 * M_PI * i / samples;
    const double r = (2.0 + std::cos(3.0 * th)) / 3.0;
    ts.push_back(th);
    pts(i, 0) = height * std::sin(3.0 * th);
    pts(i, 1) = r * std::cos(2.0 * th);
    pts(i, 2) = r * std::sin(2.0 * th);
  }
  return ParamCurve::make_compact(3, ts, pts);
}

// One positive curl on a long curve: the plane path (x2, x3) =
// ((t^2-1) g(t), t (t^2-1) / 8) crosses itself exactly once, at t = -1 vs
// t = +1, and the height splits the strands.
ParamCurve kinked_long_curve(bool mirror = false) {
  std::vector<double> ts;
  std::vector<Vec> rows;
  for (double t = -3.0; t <= 3.0 + 1e-9; t += 0.05) {
    const double g = std::pow(1.0 - (t / 3.0) * (t / 3.0), 2);
    Vec p(3);
    p(0) = 0.4 * std::pow(1.0 - (t / 3.0) * (t / 3.0), 3) * (1.0 + 0.5 * t);
    p(1) = (mirror ? -0.8 : 0.8) * (t * t - 1.0) * g;
    p(2) = t * (t * t - 1.0) / 8.0;
    ts.push_back(t);
    rows.push_back(p);
  }
  Mat pts(static_cast<int>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) pts.row(i) = rows[i];
  return ParamCurve::make_long(3, ts, pts);
}

// --- brute-force crossing oracle ----------------------------------------------
//
// Dense polyline of the plane projection; all segment pairs intersected
// directly.  Independent of the library's bounding-volume search.

struct OraclePair {
  double s, t;
};

std::vector<OraclePair> oracle_crossings(const ParamCurve& curve, int m) {
  const bool compact = !curve.is_long();
  const double lo = compact ? 0.0 : curve.window_start() - 1.0;
  const double hi = compact ? 2.0 * M_PI : curve.window_end() + 1.0;
  std::vector<double> ps(m + 1);
  std::vector<Eigen::Vector2d> q(m + 1);
  for (int i = 0; i <= m; ++i) {
    ps[i] = lo + (hi - lo) * i / m;
    q[i] = curve.plane_point(ps[i]);
  }
  const double step = (hi - lo) / m;
  std::vector<OraclePair> found;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 2; j < m; ++j) {
      if (compact && i == 0 && j == m - 1) continue;  // wrap-adjacent
      const Eigen::Vector2d a = q[i], b = q[i + 1], c = q[j], d = q[j + 1];
      const Eigen::Vector2d r = b - a, s2 = d - c;
      const double den = r.x() * s2.y() - r.y() * s2.x();
      if (std::abs(den) < 1e-14) continue;
      const Eigen::Vector2d ca = c - a;
      const double u = (ca.x() * s2.y() - ca.y() * s2.x()) / den;
      const double v = (ca.x() * r.y() - ca.y() * r.x()) / den;
      if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) continue;
      OraclePair pair{ps[i] + u * step, ps[j] + v * step};
      // Parameter-space dedup against close previous hits.
      bool dup = false;
      for (const OraclePair& p : found)
        if (std::abs(p.s - pair.s) < 3 * step &&
            std::abs(p.t - pair.t) < 3 * step)
          dup = true;
      if (!dup) found.push_back(pair);
    }
  }
  std::sort(found.begin(), found.end(),
            [](const OraclePair& x, const OraclePair& y) { return x.s < y.s; });
  return found;
}

// --- derivative accuracy -------------------------------------------------------

TEST(Spline, DerivativesMatchFiniteDifferences) {
  const ParamCurve curves[] = {analytic_trefoil(96), kinked_long_curve()};
  for (const ParamCurve& c : curves) {
    const auto& ts = c.sample_params();
    for (std::size_t i = 0; i + 1 < ts.size(); i += 3) {
      const double t = 0.5 * (ts[i] + ts[i + 1]);  // segment interior
      const double h1 = 1e-6, h2 = 1e-4, h3 = 1e-3;
      const Vec d1 = (c.eval(t + h1) - c.eval(t - h1)) / (2 * h1);
      EXPECT_LT((c.eval(t, 1) - d1).norm(), 1e-5) << t;
      const Vec d2 =
          (c.eval(t + h2) - 2 * c.eval(t) + c.eval(t - h2)) / (h2 * h2);
      EXPECT_LT((c.eval(t, 2) - d2).norm(), 1e-5) << t;
      const Vec d3 = (c.eval(t + 2 * h3) - 2 * c.eval(t + h3) +
                      2 * c.eval(t - h3) - c.eval(t - 2 * h3)) /
                     (2 * h3 * h3 * h3);
      EXPECT_LT((c.eval(t, 3) - d3).norm(), 2e-4) << t;
    }
  }
}

TEST(Spline, LongTailsAreExactlyTheStandardLine) {
  const ParamCurve c = kinked_long_curve();
  for (double t : {c.window_end() + 0.01, c.window_end() + 2.0,
                   c.window_start() - 0.01, c.window_start() - 7.5}) {
    const Vec p = c.eval(t);
    EXPECT_NEAR(p(0), 0.0, 1e-12);
    EXPECT_NEAR(p(1), 0.0, 1e-12);
    EXPECT_NEAR(p(2), t, 1e-12);
    const Vec d = c.eval(t, 1);
    EXPECT_NEAR(d(0), 0.0, 1e-12);
    EXPECT_NEAR(d(1), 0.0, 1e-12);
    EXPECT_NEAR(d(2), 1.0, 1e-12);
    EXPECT_NEAR(c.eval(t, 2).norm(), 0.0, 1e-12);
  }
  // Continuity across the junction.
  const double e = c.window_end();
  EXPECT_LT((c.eval(e - 1e-9) - c.eval(e + 1e-9)).norm(), 1e-6);
}

TEST(Spline, CompactCurvesArePeriodic) {
  const ParamCurve c = analytic_trefoil(96);
  for (double t : {0.0, 0.3, 2.0, 5.9}) {
    for (int order : {0, 1, 2}) {
      EXPECT_LT((c.eval(t + 2 * M_PI, order) - c.eval(t, order)).norm(), 1e-9)
          << t << " order " << order;
    }
  }
}

TEST(Spline, ResamplingLeavesGeometryStable) {
  const ParamCurve coarse = analytic_trefoil(96);
  const ParamCurve fine = analytic_trefoil(192);
  for (double t : {0.1, 1.0, 2.5, 4.0, 5.5}) {
    EXPECT_LT((coarse.eval(t) - fine.eval(t)).norm(), 1e-4) << t;
  }
  const auto xa = find_crossings(coarse);
  const auto xb = find_crossings(fine);
  ASSERT_EQ(xa.size(), xb.size());
  for (std::size_t i = 0; i < xa.size(); ++i) {
    EXPECT_NEAR(xa[i].s, xb[i].s, 5e-3);
    EXPECT_NEAR(xa[i].t, xb[i].t, 5e-3);
    EXPECT_EQ(xa[i].diagram_sign(), xb[i].diagram_sign());
  }
  EXPECT_EQ(project_to_diagram(coarse).to_string(),
            project_to_diagram(fine).to_string());
}

// --- crossing detection ----------------------------------------------------------

TEST(Crossings, RoundCircleHasNone) {
  EXPECT_TRUE(find_crossings(fixture_round_circle()).empty());
}

TEST(Crossings, TrefoilMatchesBruteForceOracle) {
  const ParamCurve c = analytic_trefoil(96);
  const auto xs = find_crossings(c);
  const auto oracle = oracle_crossings(c, 4000);
  ASSERT_EQ(xs.size(), 3u);
  ASSERT_EQ(oracle.size(), 3u);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(xs[i].s, oracle[i].s, 1e-2);
    EXPECT_NEAR(xs[i].t, oracle[i].t, 1e-2);
    // The polished crossing is an actual coincidence of plane points.
    EXPECT_LT((c.plane_point(xs[i].s) - c.plane_point(xs[i].t)).norm(), 1e-9);
    EXPECT_GT(xs[i].height_gap, 1e-3);
  }
}

TEST(Crossings, FigureEightMatchesBruteForceOracle) {
  const ParamCurve c = fixture_compact_figure_eight();
  const auto xs = find_crossings(c);
  const auto oracle = oracle_crossings(c, 4000);
  ASSERT_EQ(xs.size(), 4u);
  ASSERT_EQ(oracle.size(), 4u);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(xs[i].s, oracle[i].s, 1e-2);
    EXPECT_NEAR(xs[i].t, oracle[i].t, 1e-2);
  }
}

TEST(Crossings, LongCurveOracleAgreement) {
  const ParamCurve c = kinked_long_curve();
  const auto xs = find_crossings(c);
  const auto oracle = oracle_crossings(c, 4000);
  ASSERT_EQ(xs.size(), 1u);
  ASSERT_EQ(oracle.size(), 1u);
  EXPECT_NEAR(xs[0].s, oracle[0].s, 1e-2);
  EXPECT_NEAR(xs[0].t, oracle[0].t, 1e-2);
}

TEST(Crossings, HandComputedCurlSigns) {
  // The curl fixture crosses at t = -1 (low strand) and t = +1 (high
  // strand); the plane tangents there make the crossing positive.
  const ParamCurve c = kinked_long_curve(false);
  const auto xs = find_crossings(c);
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_NEAR(xs[0].s, -1.0, 0.05);
  EXPECT_NEAR(xs[0].t, 1.0, 0.05);
  EXPECT_FALSE(xs[0].over_is_s);
  EXPECT_EQ(xs[0].diagram_sign(), 1);
  EXPECT_EQ(project_to_diagram(c).to_string(),
            KnotDiagram::parse("U1+ O1+", CurveKind::kLong).to_string());

  // Mirroring the plane flips the sign.
  const auto ys = find_crossings(kinked_long_curve(true));
  ASSERT_EQ(ys.size(), 1u);
  EXPECT_EQ(ys[0].diagram_sign(), -1);
}

TEST(Crossings, TrefoilCodeIsAlternatingAndLeftHanded) {
  const KnotDiagram dia = project_to_diagram(fixture_compact_trefoil(false));
  EXPECT_EQ(dia.crossing_count(), 3);
  EXPECT_TRUE(dia.alternating());
  EXPECT_EQ(dia.writhe(), -3);
}

// --- genericity ---------------------------------------------------------------

TEST(Genericity, HeightTieIsRejected) {
  // Heights with the same pi-periodicity as the projection tie all three
  // crossings (the strands actually touch in space).
  const int samples = 96;
  std::vector<double> ts;
  Mat pts(samples, 3);
  for (int i = 0; i < samples; ++i) {
    const double th = 2.0 * M_PI * i / samples;
    const double r = (2.0 + std::cos(3.0 * th)) / 3.0;
    ts.push_back(th);
    pts(i, 0) = 0.1 * std::sin(6.0 * th);
    pts(i, 1) = r * std::cos(2.0 * th);
    pts(i, 2) = r * std::sin(2.0 * th);
  }
  const ParamCurve c = ParamCurve::make_compact(3, ts, pts);
  EXPECT_THROW(find_crossings(c), GenericityError);
  const GenericityReport report = genericity_report(c);
  EXPECT_FALSE(report.clean);
  EXPECT_FALSE(report.errors.empty());
}

TEST(Genericity, TriplePointIsRejected) {
  // z = e^{i th} + e^{-2 i th} passes through the origin three times.
  const int samples = 120;
  std::vector<double> ts;
  Mat pts(samples, 3);
  for (int i = 0; i < samples; ++i) {
    const double th = 2.0 * M_PI * i / samples;
    ts.push_back(th);
    pts(i, 0) = 0.3 * std::sin(th + 0.4);
    pts(i, 1) = std::cos(th) + std::cos(2.0 * th);
    pts(i, 2) = std::sin(th) - std::sin(2.0 * th);
  }
  const ParamCurve c = ParamCurve::make_compact(3, ts, pts);
  EXPECT_THROW(find_crossings(c), GenericityError);
  const GenericityReport report = genericity_report(c);
  EXPECT_FALSE(report.clean);
}

TEST(Genericity, CleanFixturesReportClean) {
  for (const std::string& name : fixture_names()) {
    const GenericityReport report = genericity_report(fixture_by_name(name));
    EXPECT_TRUE(report.clean) << name;
    EXPECT_TRUE(report.errors.empty()) << name;
  }
}

// --- input validation ------------------------------------------------------------

TEST(InputChecks, RejectsMalformedSamples) {
  std::vector<double> ts = {0.0, 1.0, 0.5, 2.0};  // not increasing
  Mat pts = Mat::Zero(4, 3);
  EXPECT_THROW(ParamCurve::make_long(3, ts, pts), InputError);

  std::vector<double> ts2 = {0.0, 1.0, 2.0, 9.0};  // beyond the period
  EXPECT_THROW(ParamCurve::make_compact(3, ts2, pts), InputError);

  std::vector<double> ts3 = {0.0, 1.0};  // too few samples
  EXPECT_THROW(ParamCurve::make_long(3, ts3, Mat::Zero(2, 3)), InputError);

  // Long-curve ends far off the standard line.
  std::vector<double> ts4 = {-2.0, -1.0, 0.0, 1.0, 2.0};
  Mat pts4 = Mat::Zero(5, 3);
  pts4(0, 2) = -2.0;
  pts4(4, 2) = 2.0;
  pts4(0, 1) = 0.9;  // x2 offset on the entry tail
  EXPECT_THROW(ParamCurve::make_long(3, ts4, pts4), InputError);
}

TEST(InputChecks, DimensionMismatch) {
  std::vector<double> ts = {0.0, 1.0, 2.0, 3.0};
  EXPECT_THROW(ParamCurve::make_long(4, ts, Mat::Zero(4, 3)), InputError);
  EXPECT_THROW(ParamCurve::make_long(2, ts, Mat::Zero(4, 2)), InputError);
}

}  // namespace
}  // namespace knotstrata
