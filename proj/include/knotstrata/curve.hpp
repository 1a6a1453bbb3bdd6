#pragma once

// Smooth parametrized curves in R^n backed by interpolating cubic splines,
// plus plane-crossing detection for n == 3 diagrams.
//
// Long curves are defined on the whole line: inside a compact parameter
// window they follow a clamped cubic spline through the given samples, and
// outside it they coincide exactly with the standard linear embedding
// t |-> t * e_n (so both tails run along the last coordinate axis, which in
// the diagram plane is the "north" direction, never parallel to "right").
// Compact curves are 2*pi-periodic splines.

#include <stdexcept>
#include <string>
#include <vector>

#include "knotstrata/geometry.hpp"

namespace knotstrata {

// Malformed input (bad samples, bad grammar, bad arguments).  CLI exit 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometric degeneracy at shipped tolerances (tangential crossing, height
// tie, ill-conditioned system, unresolved event).  CLI exit 2.
class GenericityError : public std::runtime_error {
 public:
  explicit GenericityError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class CurveKind { kLong, kCompact };

// Interpolating cubic spline for a vector-valued function of one variable,
// in the second-derivative (moment) formulation.
struct CubicSpline {
  std::vector<double> knots;  // strictly increasing
  Mat values;                 // (#knots) x dim sample values
  Mat moments;                // (#knots) x dim second derivatives
  bool periodic = false;
  double period = 0.0;

  static CubicSpline clamped(std::vector<double> knots, Mat values,
                             const Vec& deriv_start, const Vec& deriv_end);
  static CubicSpline make_periodic(std::vector<double> knots, Mat values,
                                   double period);

  // order 0..3; the third derivative is piecewise constant.
  Vec eval(double t, int order) const;
  int dim() const { return static_cast<int>(values.cols()); }
  int segment_index(double t) const;
};

class ParamCurve {
 public:
  // ts strictly increasing; pts is (#ts) x n.  For long curves the first and
  // last samples must lie on the standard line t * e_n (within snap
  // tolerance; they are snapped exactly).  For compact curves ts must lie in
  // [0, 2*pi) and the spline closes periodically.
  static ParamCurve make_long(int n, const std::vector<double>& ts,
                              const Mat& pts);
  static ParamCurve make_compact(int n, const std::vector<double>& ts,
                                 const Mat& pts);
  static ParamCurve make_long(int n, const std::vector<double>& ts,
                              const std::vector<Vec>& pts) {
    return make_long(n, ts, stack_rows(pts));
  }
  static ParamCurve make_compact(int n, const std::vector<double>& ts,
                                 const std::vector<Vec>& pts) {
    return make_compact(n, ts, stack_rows(pts));
  }

  int n() const { return n_; }
  CurveKind kind() const { return kind_; }
  bool is_long() const { return kind_ == CurveKind::kLong; }
  double window_start() const { return t0_; }
  double window_end() const { return t1_; }
  double period() const { return 2.0 * M_PI; }

  const std::vector<double>& sample_params() const { return spline_.knots; }
  const Mat& sample_points() const { return spline_.values; }

  Vec eval(double t, int order = 0) const;

  // Convenience accessors used throughout the strata systems.
  Vec point(double t) const { return eval(t, 0); }
  Vec plane_point(double t) const { return project(eval(t, 0)); }
  Vec plane_tangent(double t) const { return project(eval(t, 1)); }
  double height(double t) const { return eval(t, 0)(0); }

  // Wrap a parameter into the fundamental domain (compact curves only).
  double wrap(double t) const;

 private:
  ParamCurve() = default;
  int n_ = 3;
  CurveKind kind_ = CurveKind::kLong;
  double t0_ = 0.0, t1_ = 1.0;
  CubicSpline spline_;
};

// A transversal double point of the plane projection (n == 3).
struct Crossing {
  double s = 0.0, t = 0.0;      // preimage parameters, s < t
  Eigen::Vector2d where;        // common plane point
  int sign = 0;                 // sign det(p f'(s), p f'(t)), parameter order
  bool over_is_s = false;       // true if f(s) lies above f(t)
  double height_gap = 0.0;      // |<f(s) - f(t), up>|

  // Standard diagram sign: orientation of (over tangent, under tangent).
  int diagram_sign() const { return over_is_s ? sign : -sign; }
  double under_param() const { return over_is_s ? t : s; }
  double over_param() const { return over_is_s ? s : t; }
};

struct CrossingOptions {
  int oversample = 8;             // polyline points per spline segment
  double newton_tol = 1e-10;      // residual tolerance for root polish
  double dedup_radius = 1e-6;     // parameter-space duplicate radius
  double margin_tol = 1e-8;       // strict-inequality tie threshold
  double cond_threshold = 1e8;    // Jacobian condition limit
  double triple_radius = 1e-7;    // plane distance flagged as a triple point
  bool throw_on_degenerate = true;
};

std::vector<Crossing> find_crossings(const ParamCurve& curve,
                                     const CrossingOptions& opts = {});

struct GenericityIssue {
  std::string what;
  double param_a = 0.0, param_b = 0.0;
};

struct GenericityReport {
  bool clean = true;
  std::vector<GenericityIssue> errors;
  std::vector<GenericityIssue> warnings;
  int crossing_count = -1;  // n == 3 only, -1 otherwise
  double min_strand_distance = 0.0;
};

// Embedding check (all n) plus crossing transversality audit (n == 3).
GenericityReport genericity_report(const ParamCurve& curve,
                                   const CrossingOptions& opts = {});

}  // namespace knotstrata
