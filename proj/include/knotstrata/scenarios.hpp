#pragma once

// Named geometric scenarios: fixture knots for invariant tests, the master
// long-trefoil shape, the bead-transport loop of long knots, the great-circle
// rotation family, the Hopf fiber family, and contractible wobble loops.

#include <array>
#include <string>
#include <vector>

#include "knotstrata/cycle.hpp"

namespace knotstrata {

// --- fixture curves -------------------------------------------------------

ParamCurve fixture_round_circle();
ParamCurve fixture_compact_trefoil(bool mirror = false);
ParamCurve fixture_compact_figure_eight();
ParamCurve fixture_long_unknot();
ParamCurve fixture_long_trefoil(bool mirror = false);

std::vector<std::string> fixture_names();
ParamCurve fixture_by_name(const std::string& name);

// --- master long-trefoil shape --------------------------------------------
//
// A long left-handed trefoil flowing south to north along the x2 = 0 axis,
// with its six crossing visits at prescribed plane tangent angles
// (45, 54, -45, 135, 36, 45 degrees against the "right" ray) and an
// alternating over/under pattern.  Heights are +-height_amplitude at the
// visits, times vertical_scale, and zero on the tails.

struct TrefoilShapeOptions {
  double height_amplitude = 0.35;
  double vertical_scale = 1.0;
  bool mirror = false;       // negate heights
  double sample_step = 0.02; // densification step for the interpolant
};

struct MasterShape {
  ParamCurve curve;
  std::array<double, 6> visit_params{};  // parameters of the six visits
  double content_center = 0.0;           // parameter center of the content
  double content_half = 0.0;             // half-width covering the content
};

MasterShape master_trefoil_shape(const TrefoilShapeOptions& opts = {});
ParamCurve trefoil_shape(const TrefoilShapeOptions& opts = {});

// --- bead transport loop ---------------------------------------------------
//
// A closed one-parameter family of long knots: a connected sum of two equal
// trefoils in which a bead carrying a small rigid copy (homothety eps^3,
// heights unflattened) is transported along the large copy (heights
// flattened by eps^2, frame first vector kept vertical), then the loop is
// closed by a six-stage diagram-preserving homotopy (grow / flatten /
// inflate / shrink / two slides) that exchanges the roles of the summands.

struct BeadLoopOptions {
  double eps = 0.05;
  int frames = 2048;      // recorded as the seeding grid hint
  int variant = 1;        // 1 reference; 2 alternate schedule + breathing
  double height_amplitude = 0.35;
  double sample_step = 0.02;
  double transport_fraction = 0.76;  // share of loop time spent in transport
  double passage_window = 0.01;      // half-width of refined passage zones
  double passage_weight = 60.0;      // schedule densification in passages
};

KnotCycle bead_transport_loop(const BeadLoopOptions& opts = {});

// Visit parameters of the underlying large knot (bead passage centers).
std::array<double, 6> bead_loop_passages(const BeadLoopOptions& opts = {});

// --- analytic families ------------------------------------------------------

// All great circles of the unit sphere in R^3: f_R(theta) = R (0, cos, sin).
KnotCycle great_circle_cycle();

// Hopf fibers of S^3 in R^4: f_q(theta) = (cos theta + i sin theta) * q.
KnotCycle hopf_fiber_cycle();

// Contractible loop: rotate the base curve about the vertical axis by
// amplitude * sin(2 pi s + phase).  Long curves are tapered near the window
// ends so the tails stay standard; compact curves rotate rigidly.
KnotCycle rotation_wobble_loop(const ParamCurve& base, double amplitude,
                               double phase = 0.9, double taper_margin = 1.0);

// Deterministic compactly-supported bump displacement (used by the
// homotopy-invariance tests); zero outside a ball, so tails survive.
ParamCurve bump_perturb(const ParamCurve& base, const Vec& center,
                        double radius, const Vec& direction);

}  // namespace knotstrata
