#include "knotstrata/cocycle.hpp"
#include <cstdio>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace knotstrata {
namespace {

// Candidate-generation policy for the loop evaluators.  These gates only
// control which speculative Newton solves are attempted; they never decide
// what counts as an event (the decision tolerances live in RunConfig).
constexpr double kTripleGate = 0.02;  // plane distance opening a triple candidate
constexpr double kAlignGate = 0.35;   // |north|/|tangent| opening an alignment candidate
constexpr double kStiffEmitTol = 1e-6;  // stiff-row floor separating zeros from branch jumps
constexpr double kMarchMaxStep = 4e-5;  // sample spacing resolving twin stiff-row zeros
constexpr double kAssembledTol = 1e-6;  // residual bound for assembled joint roots
constexpr int kGuardFactor = 20;        // x dedup_radius: collapse guard in solves
constexpr int kAlphaSeeds = 6;          // free-angle seeds per domain seed point

CrossingOptions crossing_options(const RunConfig& cfg) {
  CrossingOptions o;
  o.newton_tol = cfg.newton_tol;
  o.dedup_radius = cfg.dedup_radius;
  o.margin_tol = cfg.margin_tol;
  o.cond_threshold = cfg.cond_threshold;
  return o;
}

Vec vec1(double u) {
  Vec v(1);
  v(0) = u;
  return v;
}

double wrap_into(double x, double period) {
  double w = std::fmod(x, period);
  if (w < 0.0) w += period;
  return w;
}

// Deterministic parallel loop: indices are claimed in order and an exception
// is re-thrown for the lowest failing index, so both the results and the
// error behavior match a sequential run regardless of the thread count.
template <typename F>
void parallel_for(int count, int threads, F&& fn) {
  if (count <= 0) return;
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  std::atomic<bool> bail{false};
  auto worker = [&] {
    for (;;) {
      if (bail.load()) return;
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        bail.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (int i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

// Frame cache for systems whose only family coordinate is the loop parameter:
// a Newton iteration and its finite-difference Jacobian revisit the same u
// repeatedly.  Single-task use; callers never hold the returned reference
// across another get().
class FrameMemo {
 public:
  explicit FrameMemo(const KnotCycle* cycle) : cycle_(cycle) {
    slots_.reserve(kCap + 1);
  }
  const ParamCurve& get(double u) {
    for (const auto& slot : slots_)
      if (slot.first == u) return slot.second;
    slots_.emplace_back(u, cycle_->frame(vec1(u)));
    if (slots_.size() > kCap) slots_.erase(slots_.begin());
    return slots_.back().second;
  }

 private:
  static constexpr std::size_t kCap = 12;
  const KnotCycle* cycle_;
  std::vector<std::pair<double, ParamCurve>> slots_;
};

struct RootStats {
  double residual = 0.0;
  double cond = 0.0;
  int sign = 0;
};

RootStats stats_at(const SquareSystem& sys, const Vec& x) {
  RootStats st;
  st.residual = sys.residual(x).norm();
  const Mat J = sys.jacobian(x);
  Eigen::JacobiSVD<Mat> svd(J);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  st.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  const double det = Eigen::PartialPivLU<Mat>(J).determinant();
  st.sign = det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  return st;
}

EvalResult finalize_result(std::vector<Event> events, const RunConfig& cfg) {
  std::sort(events.begin(), events.end(), event_less);
  EvalResult res;
  res.config = cfg;
  long long total = 0;
  std::map<std::string, long long> sums;
  for (const Event& e : events) {
    const long long signed_part =
        static_cast<long long>(e.jacobian_sign) * e.multiplicity;
    sums[e.stratum] += e.multiplicity;
    res.stratum_signed[e.stratum] += signed_part;
    res.total_signed += signed_part;
    total += e.multiplicity;
  }
  for (const auto& [name, sum] : sums)
    res.stratum_mod2[name] = static_cast<int>(((sum % 2) + 2) % 2);
  res.total_mod2 = static_cast<int>(((total % 2) + 2) % 2);
  res.events = std::move(events);
  return res;
}

// ---------------------------------------------------------------------------
// Loop evaluators: the order-3 class on loops of long curves in R^3.

struct LoopContext {
  const KnotCycle* cycle = nullptr;
  RunConfig cfg;
  CrossingOptions xopts;
  double period = 1.0;
  int frames = 0;
  double guard = 0.0;  // minimal configuration-point separation during solves
};

LoopContext make_loop_context(const KnotCycle& cycle, const RunConfig& cfg) {
  if (cycle.n() != 3)
    throw InputError("the loop evaluator ships for ambient dimension 3");
  if (cycle.curve_kind() != CurveKind::kLong)
    throw InputError("class tt is evaluated on loops of long curves");
  if (cycle.domain().kind != DomainKind::kCircle)
    throw InputError("class tt expects a one-parameter (circle) family");
  LoopContext ctx;
  ctx.cycle = &cycle;
  ctx.cfg = cfg;
  ctx.xopts = crossing_options(cfg);
  ctx.period = cycle.domain().period;
  int frames = cfg.frames;
  if (frames <= 0 && !cycle.domain().grid.empty())
    frames = cycle.domain().grid[0];
  if (frames <= 0) frames = 512;
  if (frames < 8) throw InputError("frame count must be at least 8");
  ctx.frames = frames;
  ctx.cfg.frames = frames;  // echo the resolved count in results
  ctx.guard = kGuardFactor * cfg.dedup_radius;
  return ctx;
}

struct FrameScan {
  std::vector<Crossing> xs;
  std::vector<Eigen::Vector2d> under_tan;  // valid where !xs[i].over_is_s
};

std::vector<FrameScan> scan_frames(const LoopContext& ctx) {
  std::vector<FrameScan> scans(ctx.frames);
  parallel_for(ctx.frames, resolve_thread_count(ctx.cfg), [&](int k) {
    const double u = ctx.period * k / ctx.frames;
    const ParamCurve f = ctx.cycle->frame(vec1(u));
    FrameScan scan;
    scan.xs = find_crossings(f, ctx.xopts);
    scan.under_tan.resize(scan.xs.size(), Eigen::Vector2d::Zero());
    for (std::size_t i = 0; i < scan.xs.size(); ++i)
      if (!scan.xs[i].over_is_s)
        scan.under_tan[i] = f.plane_tangent(scan.xs[i].s).head<2>();
    scans[k] = std::move(scan);
  });
  return scans;
}

// Guard against the spurious solution manifolds where configuration points
// collapse onto each other (the equations degenerate there); the solver
// treats the throw as non-convergence of that candidate.
void check_separation(const Vec& params, double guard) {
  for (int i = 0; i < params.size(); ++i)
    for (int j = i + 1; j < params.size(); ++j)
      if (std::abs(params(i) - params(j)) < guard)
        throw GenericityError("configuration points collapsed during a solve");
}

// Core system of a triple point: unknowns (u, t1, t2, t3), the three curve
// points project to one plane point.
SquareSystem triple_core_system(std::shared_ptr<FrameMemo> memo, double guard) {
  return SquareSystem("triple-point", 4, [memo, guard](const Vec& x) {
    check_separation(x.tail(3), guard);
    const ParamCurve& f = memo->get(x(0));
    Vec r(4);
    r.segment(0, 2) = f.plane_point(x(1)) - f.plane_point(x(3));
    r.segment(2, 2) = f.plane_point(x(2)) - f.plane_point(x(3));
    return r;
  });
}

// Core system of an east-aligned undercrossing: unknowns (u, s, t); the two
// points cross in the plane and the plane tangent at the first is horizontal.
SquareSystem align_core_system(std::shared_ptr<FrameMemo> memo, double guard) {
  return SquareSystem("east-alignment", 3, [memo, guard](const Vec& x) {
    check_separation(x.tail(2), guard);
    const ParamCurve& f = memo->get(x(0));
    Vec r(3);
    r.segment(0, 2) = f.plane_point(x(1)) - f.plane_point(x(2));
    r(2) = perp_right(f.plane_tangent(x(1)))(0);
    return r;
  });
}

// Joint five-point system: unknowns (u, a, t1, t2, d, t3); crossing (a, d)
// plus triple point (t1, t2, t3).
SquareSystem five_point_system(std::shared_ptr<FrameMemo> memo, double guard) {
  return SquareSystem("five-point", 6, [memo, guard](const Vec& x) {
    check_separation(x.tail(5), guard);
    const ParamCurve& f = memo->get(x(0));
    Vec r(6);
    r.segment(0, 2) = f.plane_point(x(1)) - f.plane_point(x(4));
    r.segment(2, 2) = f.plane_point(x(2)) - f.plane_point(x(5));
    r.segment(4, 2) = f.plane_point(x(3)) - f.plane_point(x(5));
    return r;
  });
}

// Joint four-point system: unknowns (u, a, s, c, t); crossing (a, c) plus
// east-aligned undercrossing (s, t).
SquareSystem four_point_system(std::shared_ptr<FrameMemo> memo, double guard) {
  return SquareSystem("four-point", 5, [memo, guard](const Vec& x) {
    check_separation(x.tail(4), guard);
    const ParamCurve& f = memo->get(x(0));
    Vec r(5);
    r.segment(0, 2) = f.plane_point(x(1)) - f.plane_point(x(3));
    r.segment(2, 2) = f.plane_point(x(2)) - f.plane_point(x(4));
    r(4) = perp_right(f.plane_tangent(x(2)))(0);
    return r;
  });
}

// The two nearest parameters across a close crossing pair lie on the shared
// strand; averaging them and keeping the other two seeds the triple.
Vec triple_seed_from_pair(double u, const Crossing& x, const Crossing& y) {
  const double xp[2] = {x.s, x.t};
  const double yp[2] = {y.s, y.t};
  int bi = 0, bj = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double d = std::abs(xp[i] - yp[j]);
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  double t[3] = {0.5 * (xp[bi] + yp[bj]), xp[1 - bi], yp[1 - bj]};
  std::sort(t, t + 3);
  Vec v(4);
  v << u, t[0], t[1], t[2];
  return v;
}

using SystemFactory =
    std::function<SquareSystem(std::shared_ptr<FrameMemo>, double)>;

std::vector<Vec> solve_candidates(const LoopContext& ctx,
                                  const std::vector<Vec>& seeds,
                                  const SystemFactory& factory) {
  std::vector<Vec> slots(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), resolve_thread_count(ctx.cfg),
               [&](int i) {
                 auto memo = std::make_shared<FrameMemo>(ctx.cycle);
                 const SquareSystem sys = factory(memo, ctx.guard);
                 NewtonOutcome out;
                 try {
                   out = solve_square(sys, seeds[i], ctx.cfg);
                 } catch (const GenericityError&) {
                   return;  // collapse guard tripped inside the FD Jacobian
                 }
                 if (out.converged) slots[i] = out.root;
               });
  std::vector<Vec> roots;
  for (Vec& r : slots)
    if (r.size()) roots.push_back(std::move(r));
  return roots;
}

// --- stiff-row block solver -------------------------------------------------
//
// Families that transport material along the parametrization (a bead sliding
// along the knot) make pointwise rows such as north(tangent(s)) violently
// sensitive to the family parameter at fixed point parameters (measured
// derivative ~6e5 with feature-scale curvature), while every crossing row is
// a difference of two comoving points and stays tame.  A monolithic Newton
// solve takes quarter-frame steps along the linearized track, lands off the
// curved track by whole features, and the pointwise row throws it into
// backtracking stalls.  Alignment-type systems are therefore solved by block
// elimination: at fixed u the crossing block is solved in the point
// parameters alone (local geometry, well-scaled), and the one stiff scalar
// row is driven to zero along u by a marched, bracketed false-position
// iteration that re-solves the block at every probe.

constexpr double kMarchStep0 = 1e-6;  // first tracking hop in u

struct BlockProblem {
  int pts_dim = 0;
  // Crossing-block equations at fixed u (pts_dim of them).
  std::function<Vec(const ParamCurve&, const Vec&)> block;
  // The stiff scalar row.
  std::function<double(const ParamCurve&, const Vec&)> stiff;
};

struct InnerResult {
  bool ok = false;
  Vec pts;
  double residual = 0.0;
  double G = 0.0;  // stiff row at the solved block
};

InnerResult inner_block(const LoopContext& ctx, const BlockProblem& prob,
                        double u, const Vec& guess) {
  InnerResult res;
  const ParamCurve f = ctx.cycle->frame(vec1(u));
  const double guard = ctx.guard;
  const auto& block = prob.block;
  const SquareSystem sys("crossing-block", prob.pts_dim,
                         [&f, &block, guard](const Vec& p) {
                           check_separation(p, guard);
                           return block(f, p);
                         });
  NewtonOutcome out;
  try {
    out = solve_square(sys, guess, ctx.cfg);
  } catch (const GenericityError&) {
    return res;
  }
  if (!out.converged) return res;
  res.ok = true;
  res.pts = out.root;
  res.residual = out.residual;
  res.G = prob.stiff(f, out.root);
  return res;
}

// Walk the solved block from (u0, pts0) to u1 in growing hops, warm-starting
// each inner solve with a drift-corrected guess (the block solution moves at
// the material transport rate, far too fast for stale seeds).  Records the
// samples when asked.  Returns false when the block is lost along the way.
bool march_block(const LoopContext& ctx, const BlockProblem& prob, double u0,
                 const Vec& pts0, double u1, InnerResult* out,
                 std::vector<std::pair<double, InnerResult>>* samples) {
  double u = u0;
  Vec pts = pts0;
  Vec drift = Vec::Zero(prob.pts_dim);
  bool have_drift = false;
  double step = kMarchStep0;
  const double cap = std::min(std::max(std::abs(u1 - u0) / 4.0, kMarchStep0),
                              kMarchMaxStep);
  const double dir = u1 >= u0 ? 1.0 : -1.0;
  InnerResult last;
  last.ok = false;
  while (std::abs(u1 - u) > 1e-15) {
    const double remain = std::abs(u1 - u);
    const double unew = remain <= step * 1.5 ? u1 : u + dir * step;
    Vec guess = pts;
    if (have_drift) guess += drift * (unew - u);
    const InnerResult r = inner_block(ctx, prob, unew, guess);
    if (!r.ok) return false;
    drift = (r.pts - pts) / (unew - u);
    have_drift = true;
    if (samples) samples->emplace_back(unew, r);
    pts = r.pts;
    u = unew;
    last = r;
    step = std::min(step * 3.0, cap);
  }
  if (!last.ok) {
    last = inner_block(ctx, prob, u1, pts);
    if (!last.ok) return false;
  }
  *out = last;
  return true;
}

// False-position refinement (Illinois variant) of a bracketed sign change of
// the stiff row; every probe re-solves the crossing block.  The inner solve
// fixes the block points only to its own tolerance, and the stiff row sees
// that error through the feature-scale gradient, so |G| bottoms out well
// above the Newton tolerance; convergence is therefore judged by the bracket
// width, with the best point seen emitted if its stiff value dropped to the
// measurement floor.  A collapsed bracket whose stiff row never became small
// is a branch discontinuity of the block solution (the inner solve jumped
// between crossings), not a zero, and is dropped.
bool refine_stiff_root(const LoopContext& ctx, const BlockProblem& prob,
                       double ua, InnerResult a, double ub, InnerResult b,
                       Vec* out) {
  double best_u = 0.0;
  double best_g = std::numeric_limits<double>::infinity();
  InnerResult best;
  const auto emit = [&](double u, const InnerResult& r) {
    Vec root(1 + prob.pts_dim);
    root(0) = u;
    root.tail(prob.pts_dim) = r.pts;
    *out = root;
    return true;
  };
  for (int it = 0; it < 80; ++it) {
    double um = (a.G * ub - b.G * ua) / (a.G - b.G);
    const double lo = std::min(ua, ub), hi = std::max(ua, ub);
    const double pad = 0.05 * (hi - lo);
    if (!(um > lo + pad && um < hi - pad)) um = 0.5 * (lo + hi);
    const bool from_a = std::abs(um - ua) <= std::abs(um - ub);
    InnerResult m;
    if (!march_block(ctx, prob, from_a ? ua : ub, (from_a ? a : b).pts, um, &m,
                     nullptr)) {
      std::fprintf(stderr, "DBG refine march-lost it=%d um=%.9f width=%.3e\n",
                   it, um, hi - lo);
      return false;
    }
    if (std::abs(m.G) < ctx.cfg.newton_tol) return emit(um, m);
    if (std::abs(m.G) < best_g) {
      best_g = std::abs(m.G);
      best_u = um;
      best = m;
    }
    if (hi - lo < 1e-13 * (1.0 + std::abs(lo))) {
      if (best_g < kStiffEmitTol) return emit(best_u, best);
      std::fprintf(stderr, "DBG refine collapse it=%d best_g=%.3e u=%.9f\n",
                   it, best_g, 0.5 * (lo + hi));
      return false;
    }
    if ((m.G > 0.0) == (a.G > 0.0)) {
      ua = um;
      a = m;
      b.G *= 0.5;
    } else {
      ub = um;
      b = m;
      a.G *= 0.5;
    }
  }
  if (best_g < kStiffEmitTol) return emit(best_u, best);
  std::fprintf(stderr, "DBG refine exhaust best_g=%.3e\n", best_g);
  return false;
}

// Solve all alignment-type candidates: walk one frame interval to either
// side of each seed, scan the recorded samples for sign changes of the stiff
// row, and refine each bracket.  Deterministic: seeds are processed into
// indexed slots and flattened in order.
std::vector<Vec> track_stiff_roots(const LoopContext& ctx,
                                   const BlockProblem& prob,
                                   const std::vector<Vec>& seeds) {
  std::vector<std::vector<Vec>> slots(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), resolve_thread_count(ctx.cfg),
               [&](int i) {
                 const double uk = seeds[i](0);
                 const Vec pts0 = seeds[i].tail(prob.pts_dim);
                 const InnerResult a0 = inner_block(ctx, prob, uk, pts0);
                 if (!a0.ok) {
                   std::fprintf(stderr, "DBG seed %d uk=%.6f LOST at seed\n", i,
                                uk);
                   return;
                 }
                 const double h = ctx.period / ctx.frames;
                 for (const double dir : {1.0, -1.0}) {
                   std::vector<std::pair<double, InnerResult>> samples;
                   samples.emplace_back(uk, a0);
                   InnerResult end;
                   const bool full = march_block(ctx, prob, uk, a0.pts,
                                                 uk + dir * h, &end,
                                                 &samples);  // partial scanned
                   double gmin = 1e300, gmax = -1e300;
                   int flips = 0;
                   for (std::size_t m = 0; m < samples.size(); ++m) {
                     gmin = std::min(gmin, samples[m].second.G);
                     gmax = std::max(gmax, samples[m].second.G);
                     if (m + 1 < samples.size() &&
                         samples[m].second.G * samples[m + 1].second.G < 0.0)
                       ++flips;
                   }
                   std::fprintf(stderr,
                                "DBG seed %d uk=%.6f dir=%+.0f full=%d ns=%zu "
                                "G0=%+.4f Grange=[%+.4f,%+.4f] flips=%d\n",
                                i, uk, dir, full ? 1 : 0, samples.size(),
                                a0.G, gmin, gmax, flips);
                   for (std::size_t m = 0; m + 1 < samples.size(); ++m) {
                     const auto& [ua, ra] = samples[m];
                     const auto& [ub, rb] = samples[m + 1];
                     if (std::abs(ra.G) < kStiffEmitTol) {
                       Vec root(1 + prob.pts_dim);
                       root(0) = ua;
                       root.tail(prob.pts_dim) = ra.pts;
                       slots[i].push_back(root);
                       continue;
                     }
                     if (ra.G * rb.G < 0.0) {
                       Vec root;
                       if (refine_stiff_root(ctx, prob, ua, ra, ub, rb,
                                             &root)) {
                         std::fprintf(stderr,
                                      "DBG refine OK seed %d [%.6f,%.6f] -> "
                                      "u=%.9f\n",
                                      i, ua, ub, root(0));
                         slots[i].push_back(root);
                       } else {
                         std::fprintf(stderr,
                                      "DBG refine FAIL seed %d [%.6f,%.6f] "
                                      "Ga=%+.4f Gb=%+.4f\n",
                                      i, ua, ub, ra.G, rb.G);
                       }
                     }
                   }
                 }
               });
  std::vector<Vec> roots;
  for (auto& s : slots)
    for (Vec& r : s) roots.push_back(std::move(r));
  return roots;
}

BlockProblem align_block_problem() {
  BlockProblem prob;
  prob.pts_dim = 2;
  prob.block = [](const ParamCurve& f, const Vec& p) -> Vec {
    return f.plane_point(p(0)) - f.plane_point(p(1));
  };
  prob.stiff = [](const ParamCurve& f, const Vec& p) {
    return perp_right(f.plane_tangent(p(0)))(0);
  };
  return prob;
}

BlockProblem four_point_block_problem() {
  BlockProblem prob;
  prob.pts_dim = 4;  // (a, s, c, t)
  prob.block = [](const ParamCurve& f, const Vec& p) -> Vec {
    Vec r(4);
    r.segment(0, 2) = f.plane_point(p(0)) - f.plane_point(p(2));
    r.segment(2, 2) = f.plane_point(p(1)) - f.plane_point(p(3));
    return r;
  };
  prob.stiff = [](const ParamCurve& f, const Vec& p) {
    return perp_right(f.plane_tangent(p(1)))(0);
  };
  return prob;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return a.size() < b.size();
}

bool same_loop_root(const Vec& a, const Vec& b, double radius, double period) {
  if (same_root(a, b, radius)) return true;
  Vec s = b;
  s(0) = b(0) + period;
  if (same_root(a, s, radius)) return true;
  s(0) = b(0) - period;
  return same_root(a, s, radius);
}

std::vector<Vec> dedup_loop_roots(std::vector<Vec> roots, double radius,
                                  double period) {
  std::sort(roots.begin(), roots.end(), lex_less);
  std::vector<Vec> kept;
  for (const Vec& r : roots) {
    bool dup = false;
    for (const Vec& k : kept)
      if (same_loop_root(r, k, radius, period)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(r);
  }
  return kept;
}

bool near_param(double a, double b, double guard) {
  return std::abs(a - b) < guard * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Enumerate the crossings of the frozen frame at an event instant.  The frame
// is degenerate there by construction (that is what the event is), so the
// crossing scan runs with throws disabled; crossings that could not be
// classified are only tolerated when they belong to the event configuration
// itself.
std::vector<Crossing> crossings_at_event(const LoopContext& ctx,
                                         const ParamCurve& frame) {
  CrossingOptions relaxed = ctx.xopts;
  relaxed.throw_on_degenerate = false;
  return find_crossings(frame, relaxed);
}

// Completer scan shared by the two counting strata: over-first crossings
// (a, c) with a < lo and c inside (win_lo, win_hi).  Every classified
// crossing near a window boundary is a margin violation.
struct CompleterScan {
  int count = 0;
  double margin = std::numeric_limits<double>::infinity();
  std::vector<Crossing> found;
};

CompleterScan scan_completers(const LoopContext& ctx,
                              const std::vector<Crossing>& xs,
                              const std::vector<double>& core_params, double lo,
                              double win_lo, double win_hi, double u) {
  CompleterScan scan;
  for (const Crossing& x : xs) {
    bool s_in_core = false, t_in_core = false;
    for (double c : core_params) {
      s_in_core = s_in_core || near_param(x.s, c, ctx.guard);
      t_in_core = t_in_core || near_param(x.t, c, ctx.guard);
    }
    if (s_in_core && t_in_core) continue;  // part of the event configuration
    if (x.sign == 0)
      throw GenericityError("degenerate crossing at event instant u=" +
                            std::to_string(u));
    const double slack_a = lo - x.s;
    const double slack_lo = x.t - win_lo;
    const double slack_hi = win_hi - x.t;
    const double tightest =
        std::min({std::abs(slack_a), std::abs(slack_lo), std::abs(slack_hi)});
    if (tightest < ctx.cfg.margin_tol)
      throw GenericityError("completer window tie at event instant u=" +
                            std::to_string(u));
    if (!x.over_is_s) continue;
    if (slack_a > 0.0 && slack_lo > 0.0 && slack_hi > 0.0) {
      ++scan.count;
      scan.margin = std::min(
          {scan.margin, slack_a, slack_lo, slack_hi, x.height_gap});
      scan.found.push_back(x);
    }
  }
  return scan;
}

void verify_assembled_root(const LoopContext& ctx, const SquareSystem& joint,
                           const Vec& root, const char* what) {
  const RootStats st = stats_at(joint, root);
  if (st.residual > kAssembledTol)
    throw GenericityError(std::string(what) +
                          " failed residual verification at u=" +
                          std::to_string(root(0)));
  if (st.cond > ctx.cfg.cond_threshold)
    throw GenericityError(std::string(what) +
                          " is non-transversal at u=" + std::to_string(root(0)));
}

// Exterior-angle test at a triple point whose first point sits at the middle
// height: decompose the rightward ray over the two lower plane tangents and
// require at least one non-positive coefficient.  Returns (counted, margin).
std::pair<bool, double> exterior_angle_test(const LoopContext& ctx,
                                            const ParamCurve& f, double t1,
                                            double t2, double u) {
  const Eigen::Vector2d c1 = f.plane_tangent(t1).head<2>();
  const Eigen::Vector2d c2 = f.plane_tangent(t2).head<2>();
  const double det = c1.x() * c2.y() - c1.y() * c2.x();
  const double scale = c1.norm() * c2.norm();
  if (scale <= 0.0 || std::abs(det) / scale < 1.0 / ctx.cfg.cond_threshold)
    throw GenericityError("parallel lower tangents at triple point u=" +
                          std::to_string(u));
  Eigen::Matrix2d M;
  M.col(0) = c1;
  M.col(1) = c2;
  const Eigen::Vector2d lm = M.inverse() * Eigen::Vector2d(1.0, 0.0);
  const double tightest = std::min(std::abs(lm(0)), std::abs(lm(1)));
  if (tightest < ctx.cfg.margin_tol)
    throw GenericityError("exterior-angle boundary at triple point u=" +
                          std::to_string(u));
  return {std::min(lm(0), lm(1)) < 0.0, tightest};
}

Event make_event(std::string stratum, const Vec& root, int multiplicity,
                 const RootStats& st, double margin) {
  Event ev;
  ev.stratum = std::move(stratum);
  ev.family_param = root(0);
  ev.location = root;
  ev.multiplicity = multiplicity;
  ev.jacobian_sign = st.sign;
  ev.margin = margin;
  ev.residual = st.residual;
  ev.cond = st.cond;
  return ev;
}

// Tracking-route classification of one deduplicated triple-point root: an
// "Sa"-type event whose multiplicity counts the completing crossings, plus
// possibly an "Sc"-type event at the same root.
void classify_triple_root(const LoopContext& ctx, const Vec& root,
                          std::vector<Event>* out) {
  const double u = root(0), t1 = root(1), t2 = root(2), t3 = root(3);
  auto memo = std::make_shared<FrameMemo>(ctx.cycle);
  const SquareSystem core = triple_core_system(memo, ctx.guard);
  const RootStats st = stats_at(core, root);
  if (st.cond > ctx.cfg.cond_threshold)
    throw GenericityError("ill-conditioned triple-point root at u=" +
                          std::to_string(u));
  const ParamCurve f = ctx.cycle->frame(vec1(u));
  const double h1 = f.height(t1), h2 = f.height(t2), h3 = f.height(t3);
  const double g31 = h3 - h1, g32 = h3 - h2, g12 = h1 - h2;
  if (std::min({std::abs(g31), std::abs(g32), std::abs(g12)}) <
      ctx.cfg.margin_tol)
    throw GenericityError("height tie at triple point u=" + std::to_string(u));
  if (!(g31 > 0.0 && g32 > 0.0)) return;  // last strand not on top: no stratum

  const std::vector<Crossing> xs = crossings_at_event(ctx, f);
  const CompleterScan scan =
      scan_completers(ctx, xs, {t1, t2, t3}, t1, t2, t3, u);
  for (const Crossing& x : scan.found) {
    Vec full(6);
    full << u, x.s, t1, t2, x.t, t3;
    const SquareSystem joint = five_point_system(memo, ctx.guard);
    verify_assembled_root(ctx, joint, full, "five-point configuration");
  }
  const double sa_margin =
      std::min({g31, g32, scan.margin});
  out->push_back(make_event("Sa", root, scan.count, st, sa_margin));

  // The same root carries a three-point event when the first point sits at
  // the middle height and the rightward ray lies in the exterior angle of
  // the two lower tangents.
  if (g12 > 0.0) {
    const auto [counted, angle_margin] = exterior_angle_test(ctx, f, t1, t2, u);
    const double sc_margin = std::min({g31, g32, g12, angle_margin});
    out->push_back(make_event("Sc", root, counted ? 1 : 0, st, sc_margin));
  }
}

// Tracking-route classification of one deduplicated alignment root.
void classify_align_root(const LoopContext& ctx, const Vec& root,
                         std::vector<Event>* out) {
  const double u = root(0), s = root(1), t = root(2);
  if (s >= t) {
    std::fprintf(stderr, "DBG align REJ s>=t u=%.6f s=%.6f t=%.6f\n", u, s, t);
    return;  // the aligned point must come first on the stratum
  }
  auto memo = std::make_shared<FrameMemo>(ctx.cycle);
  const SquareSystem core = align_core_system(memo, ctx.guard);
  const RootStats st = stats_at(core, root);
  if (st.residual > kAssembledTol)
    throw GenericityError("alignment root failed residual verification at u=" +
                          std::to_string(u));
  if (st.cond > ctx.cfg.cond_threshold) {
    std::fprintf(stderr,
                 "DBG align root u=%.9f s=%.9f t=%.9f res=%.3e cond=%.3e\n", u,
                 s, t, st.residual, st.cond);
    throw GenericityError("ill-conditioned alignment root at u=" +
                          std::to_string(u));
  }
  const ParamCurve f = ctx.cycle->frame(vec1(u));
  const double hgap = f.height(t) - f.height(s);
  if (std::abs(hgap) < ctx.cfg.margin_tol)
    throw GenericityError("height tie at alignment instant u=" +
                          std::to_string(u));
  if (hgap < 0.0) {
    std::fprintf(stderr, "DBG align REJ hgap<0 u=%.6f s=%.6f t=%.6f\n", u, s,
                 t);
    return;  // aligned point is the over strand: no stratum
  }
  const double east = right_component(f.plane_tangent(s));
  if (std::abs(east) < ctx.cfg.margin_tol)
    throw GenericityError("vanishing aligned tangent at u=" +
                          std::to_string(u));
  if (east < 0.0) {
    std::fprintf(stderr, "DBG align REJ east<0 u=%.6f s=%.6f t=%.6f\n", u, s,
                 t);
    return;  // west-pointing tangent: no stratum
  }

  const std::vector<Crossing> xs = crossings_at_event(ctx, f);
  const CompleterScan scan = scan_completers(ctx, xs, {s, t}, s, s, t, u);
  for (const Crossing& x : scan.found) {
    Vec full(5);
    full << u, x.s, s, x.t, t;
    const SquareSystem joint = four_point_system(memo, ctx.guard);
    verify_assembled_root(ctx, joint, full, "four-point configuration");
  }
  const double margin = std::min({hgap, east, scan.margin});
  out->push_back(make_event("Sb", root, scan.count, st, margin));
}

EvalResult evaluate_tt_impl(const KnotCycle& cycle, const RunConfig& cfg) {
  const LoopContext ctx = make_loop_context(cycle, cfg);
  const std::vector<FrameScan> scans = scan_frames(ctx);

  std::vector<Vec> triple_seeds, align_seeds;
  for (int k = 0; k < ctx.frames; ++k) {
    const double u = ctx.period * k / ctx.frames;
    const FrameScan& sc = scans[k];
    // A frame with a plane-proximate crossing pair is a close-passage frame:
    // local tangents there swing through a whole arc between frames, so the
    // per-frame alignment gate below cannot be trusted to open and every
    // lower-strand crossing is tracked instead.
    bool proximate = false;
    for (std::size_t i = 0; i < sc.xs.size() && !proximate; ++i)
      for (std::size_t j = i + 1; j < sc.xs.size() && !proximate; ++j)
        if ((sc.xs[i].where - sc.xs[j].where).norm() < kTripleGate)
          proximate = true;
    for (std::size_t i = 0; i < sc.xs.size(); ++i) {
      for (std::size_t j = i + 1; j < sc.xs.size(); ++j)
        if ((sc.xs[i].where - sc.xs[j].where).norm() < kTripleGate)
          triple_seeds.push_back(triple_seed_from_pair(u, sc.xs[i], sc.xs[j]));
      const Crossing& x = sc.xs[i];
      if (!x.over_is_s) {
        const Eigen::Vector2d& tan = sc.under_tan[i];
        const bool gated = tan.norm() > 0.0 &&
                           std::abs(tan.y()) < kAlignGate * tan.norm() &&
                           tan.x() > 0.0;
        if (gated || proximate) {
          Vec seed(3);
          seed << u, x.s, x.t;
          align_seeds.push_back(seed);
        }
      }
    }
  }

  std::vector<Vec> troots = solve_candidates(
      ctx, triple_seeds,
      [](std::shared_ptr<FrameMemo> m, double g) {
        return triple_core_system(std::move(m), g);
      });
  for (Vec& r : troots) {
    r(0) = wrap_into(r(0), ctx.period);
    std::sort(r.data() + 1, r.data() + 4);
  }
  troots = dedup_loop_roots(std::move(troots), cfg.dedup_radius, ctx.period);

  std::vector<Vec> aroots =
      track_stiff_roots(ctx, align_block_problem(), align_seeds);
  for (Vec& r : aroots) r(0) = wrap_into(r(0), ctx.period);
  aroots = dedup_loop_roots(std::move(aroots), cfg.dedup_radius, ctx.period);

  const int nt = static_cast<int>(troots.size());
  const int na = static_cast<int>(aroots.size());
  std::vector<std::vector<Event>> per_root(nt + na);
  parallel_for(nt + na, resolve_thread_count(ctx.cfg), [&](int i) {
    if (i < nt)
      classify_triple_root(ctx, troots[i], &per_root[i]);
    else
      classify_align_root(ctx, aroots[i - nt], &per_root[i]);
  });

  std::vector<Event> events;
  for (auto& chunk : per_root)
    events.insert(events.end(), chunk.begin(), chunk.end());
  return finalize_result(std::move(events), ctx.cfg);
}

// Blind-route classification of one deduplicated joint five-point root.
void classify_five_point_root(const LoopContext& ctx, const Vec& root,
                              std::vector<Event>* out) {
  const double u = root(0);
  const double a = root(1), t1 = root(2), t2 = root(3), d = root(4),
               t3 = root(5);
  auto memo = std::make_shared<FrameMemo>(ctx.cycle);
  const SquareSystem joint = five_point_system(memo, ctx.guard);
  const RootStats st = stats_at(joint, root);
  // A sorted tuple that no longer satisfies the canonical labeling encodes a
  // different coincidence pattern; it is not a point of this stratum.
  if (st.residual > kAssembledTol) return;
  if (st.cond > ctx.cfg.cond_threshold)
    throw GenericityError("ill-conditioned five-point root at u=" +
                          std::to_string(u));
  const ParamCurve f = ctx.cycle->frame(vec1(u));
  double order_margin = std::numeric_limits<double>::infinity();
  const double gaps[4] = {t1 - a, t2 - t1, d - t2, t3 - d};
  for (double g : gaps) {
    if (std::abs(g) < ctx.cfg.margin_tol)
      throw GenericityError("interleaving tie at five-point root u=" +
                            std::to_string(u));
    if (g < 0.0) return;  // wrong interleaving pattern: not on the stratum
    order_margin = std::min(order_margin, g);
  }
  const double hc = f.height(a) - f.height(d);
  const double g31 = f.height(t3) - f.height(t1);
  const double g32 = f.height(t3) - f.height(t2);
  if (std::min({std::abs(hc), std::abs(g31), std::abs(g32)}) <
      ctx.cfg.margin_tol)
    throw GenericityError("height tie at five-point root u=" +
                          std::to_string(u));
  if (!(hc > 0.0 && g31 > 0.0 && g32 > 0.0)) return;
  const double margin = std::min({order_margin, hc, g31, g32});
  out->push_back(make_event("Sa", root, 1, st, margin));
}

// Blind-route classification of one deduplicated joint four-point root.
void classify_four_point_root(const LoopContext& ctx, const Vec& root,
                              std::vector<Event>* out) {
  const double u = root(0);
  const double a = root(1), s = root(2), c = root(3), t = root(4);
  auto memo = std::make_shared<FrameMemo>(ctx.cycle);
  const SquareSystem joint = four_point_system(memo, ctx.guard);
  const RootStats st = stats_at(joint, root);
  if (st.residual > kAssembledTol) return;
  if (st.cond > ctx.cfg.cond_threshold)
    throw GenericityError("ill-conditioned four-point root at u=" +
                          std::to_string(u));
  const ParamCurve f = ctx.cycle->frame(vec1(u));
  double order_margin = std::numeric_limits<double>::infinity();
  const double gaps[3] = {s - a, c - s, t - c};
  for (double g : gaps) {
    if (std::abs(g) < ctx.cfg.margin_tol)
      throw GenericityError("interleaving tie at four-point root u=" +
                            std::to_string(u));
    if (g < 0.0) return;
    order_margin = std::min(order_margin, g);
  }
  const double hc = f.height(a) - f.height(c);
  const double hgap = f.height(t) - f.height(s);
  const double east = right_component(f.plane_tangent(s));
  if (std::min({std::abs(hc), std::abs(hgap), std::abs(east)}) <
      ctx.cfg.margin_tol)
    throw GenericityError("height or tangent tie at four-point root u=" +
                          std::to_string(u));
  if (!(hc > 0.0 && hgap > 0.0 && east > 0.0)) return;
  const double margin = std::min({order_margin, hc, hgap, east});
  out->push_back(make_event("Sb", root, 1, st, margin));
}

// Blind-route classification of one deduplicated core triple root: only the
// three-point stratum is decided here (the five-point stratum is solved
// jointly in the blind route).
void classify_core_root_blind(const LoopContext& ctx, const Vec& root,
                              std::vector<Event>* out) {
  const double u = root(0), t1 = root(1), t2 = root(2), t3 = root(3);
  auto memo = std::make_shared<FrameMemo>(ctx.cycle);
  const SquareSystem core = triple_core_system(memo, ctx.guard);
  const RootStats st = stats_at(core, root);
  if (st.cond > ctx.cfg.cond_threshold)
    throw GenericityError("ill-conditioned triple-point root at u=" +
                          std::to_string(u));
  const ParamCurve f = ctx.cycle->frame(vec1(u));
  const double h1 = f.height(t1), h2 = f.height(t2), h3 = f.height(t3);
  const double g31 = h3 - h1, g32 = h3 - h2, g12 = h1 - h2;
  if (std::min({std::abs(g31), std::abs(g32), std::abs(g12)}) <
      ctx.cfg.margin_tol)
    throw GenericityError("height tie at triple point u=" + std::to_string(u));
  if (!(g31 > 0.0 && g32 > 0.0 && g12 > 0.0)) return;
  const auto [counted, angle_margin] = exterior_angle_test(ctx, f, t1, t2, u);
  if (!counted) return;
  const double margin = std::min({g31, g32, g12, angle_margin});
  out->push_back(make_event("Sc", root, 1, st, margin));
}

EvalResult evaluate_tt_blind_impl(const KnotCycle& cycle,
                                  const RunConfig& cfg) {
  const LoopContext ctx = make_loop_context(cycle, cfg);
  const std::vector<FrameScan> scans = scan_frames(ctx);

  std::vector<Vec> five_seeds, four_seeds, core_seeds;
  for (int k = 0; k < ctx.frames; ++k) {
    const double u = ctx.period * k / ctx.frames;
    const FrameScan& sc = scans[k];
    // Close-passage frames (see the tracking route) defeat the per-frame
    // alignment gate, so every lower-strand crossing is paired up there.
    bool proximate = false;
    for (std::size_t i = 0; i < sc.xs.size() && !proximate; ++i)
      for (std::size_t j = i + 1; j < sc.xs.size() && !proximate; ++j)
        if ((sc.xs[i].where - sc.xs[j].where).norm() < kTripleGate)
          proximate = true;
    for (std::size_t i = 0; i < sc.xs.size(); ++i) {
      for (std::size_t j = i + 1; j < sc.xs.size(); ++j) {
        if ((sc.xs[i].where - sc.xs[j].where).norm() >= kTripleGate) continue;
        const Vec trip = triple_seed_from_pair(u, sc.xs[i], sc.xs[j]);
        core_seeds.push_back(trip);
        for (const Crossing& w : sc.xs) {
          if (!w.over_is_s || w.sign == 0) continue;
          if (w.s < trip(1) && trip(2) < w.t && w.t < trip(3)) {
            Vec seed(6);
            seed << u, w.s, trip(1), trip(2), w.t, trip(3);
            five_seeds.push_back(seed);
          }
        }
      }
      const Crossing& x = sc.xs[i];
      if (!x.over_is_s) {
        const Eigen::Vector2d& tan = sc.under_tan[i];
        const bool gated = tan.norm() > 0.0 &&
                           std::abs(tan.y()) < kAlignGate * tan.norm() &&
                           tan.x() > 0.0;
        if (gated || proximate) {
          for (const Crossing& w : sc.xs) {
            if (!w.over_is_s || w.sign == 0) continue;
            if (w.s < x.s && x.s < w.t && w.t < x.t) {
              Vec seed(5);
              seed << u, w.s, x.s, w.t, x.t;
              four_seeds.push_back(seed);
            }
          }
        }
      }
    }
  }

  std::vector<Vec> roots5 = solve_candidates(
      ctx, five_seeds,
      [](std::shared_ptr<FrameMemo> m, double g) {
        return five_point_system(std::move(m), g);
      });
  for (Vec& r : roots5) {
    r(0) = wrap_into(r(0), ctx.period);
    std::sort(r.data() + 1, r.data() + 6);
  }
  roots5 = dedup_loop_roots(std::move(roots5), cfg.dedup_radius, ctx.period);

  std::vector<Vec> roots4 =
      track_stiff_roots(ctx, four_point_block_problem(), four_seeds);
  for (Vec& r : roots4) {
    r(0) = wrap_into(r(0), ctx.period);
    std::sort(r.data() + 1, r.data() + 5);
  }
  roots4 = dedup_loop_roots(std::move(roots4), cfg.dedup_radius, ctx.period);

  std::vector<Vec> roots3 = solve_candidates(
      ctx, core_seeds,
      [](std::shared_ptr<FrameMemo> m, double g) {
        return triple_core_system(std::move(m), g);
      });
  for (Vec& r : roots3) {
    r(0) = wrap_into(r(0), ctx.period);
    std::sort(r.data() + 1, r.data() + 4);
  }
  roots3 = dedup_loop_roots(std::move(roots3), cfg.dedup_radius, ctx.period);

  const int n5 = static_cast<int>(roots5.size());
  const int n4 = static_cast<int>(roots4.size());
  const int n3 = static_cast<int>(roots3.size());
  std::vector<std::vector<Event>> per_root(n5 + n4 + n3);
  parallel_for(n5 + n4 + n3, resolve_thread_count(ctx.cfg), [&](int i) {
    if (i < n5)
      classify_five_point_root(ctx, roots5[i], &per_root[i]);
    else if (i < n5 + n4)
      classify_four_point_root(ctx, roots4[i - n5], &per_root[i]);
    else
      classify_core_root_blind(ctx, roots3[i - n5 - n4], &per_root[i]);
  });

  std::vector<Event> events;
  for (auto& chunk : per_root)
    events.insert(events.end(), chunk.begin(), chunk.end());
  return finalize_result(std::move(events), ctx.cfg);
}

// ---------------------------------------------------------------------------
// Compact classes.

int compact_class_dim(const std::string& cls, int n) {
  if (cls == "A") return n - 1;
  if (cls == "B") return n - 2;
  if (cls == "C") return 2 * n - 3;
  if (cls == "D") return 2 * n - 6;
  throw InputError("unknown class '" + cls + "' (expected A, B, C, or D)");
}

// The degree-3 class of a zero-dimensional family: counted combinatorially
// from interleaved crossing pairs of the single frame, one event per pair.
EvalResult evaluate_degree3_point_family(const KnotCycle& cycle,
                                         const RunConfig& cfg) {
  const std::vector<Vec> seeds = cycle.seed_points();
  const Vec at = seeds.empty() ? Vec(cycle.domain().coord_dim) : seeds.front();
  const ParamCurve f = cycle.frame(at);
  const std::vector<Crossing> xs = find_crossings(f, crossing_options(cfg));
  std::vector<Event> events;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      const Crossing& x = xs[i];
      const Crossing& y = xs[j];
      if (!(x.s < y.s && y.s < x.t && x.t < y.t)) continue;
      if (x.over_is_s || !y.over_is_s) continue;
      Event e;
      e.stratum = "Da";
      e.family_param = 0.0;
      Vec loc(4);
      loc << x.s, y.s, x.t, y.t;
      e.location = loc;
      e.multiplicity = 1;
      e.jacobian_sign = x.diagram_sign() * y.diagram_sign();
      e.margin = std::min({x.height_gap, y.height_gap, y.s - x.s, x.t - y.s,
                           y.t - x.t});
      events.push_back(e);
    }
  }
  return finalize_result(std::move(events), cfg);
}

// One membership subsystem of a compact class: plane equations over the
// domain chart (plus the free angle where the stratum has one), and the
// inequality decision at a root.
struct CompactSub {
  std::string name;
  bool has_alpha = false;
  double fold = 0.0;  // fold period of the free angle
  std::function<Vec(const ParamCurve&, double)> plane_eqs;
  // Returns 1 when the root lies on the stratum, 0 when it decisively does
  // not; throws on inequality ties.  Fills the decision margin.
  std::function<int(const ParamCurve&, double, double, double*)> decide;
};

std::vector<CompactSub> compact_subsystems(const std::string& cls) {
  std::vector<CompactSub> subs;
  if (cls == "A") {
    CompactSub a;
    a.name = "A";
    a.plane_eqs = [](const ParamCurve& f, double) -> Vec {
      return f.plane_point(0.0) - f.plane_point(M_PI);
    };
    a.decide = [](const ParamCurve& f, double, double margin_tol,
                  double* margin) {
      const double gap = f.height(0.0) - f.height(M_PI);
      if (std::abs(gap) < margin_tol)
        throw GenericityError("height tie at an anchored coincidence");
      *margin = std::abs(gap);
      return gap > 0.0 ? 1 : 0;
    };
    subs.push_back(std::move(a));
  } else if (cls == "B") {
    CompactSub ba;
    ba.name = "Ba";
    ba.has_alpha = true;
    ba.fold = M_PI;
    ba.plane_eqs = [](const ParamCurve& f, double alpha) -> Vec {
      return f.plane_point(alpha) - f.plane_point(alpha + M_PI);
    };
    ba.decide = [](const ParamCurve& f, double alpha, double margin_tol,
                   double* margin) {
      const double gap = f.height(alpha) - f.height(alpha + M_PI);
      if (std::abs(gap) < margin_tol)
        throw GenericityError("height tie at an antipodal coincidence");
      *margin = std::abs(gap);
      return gap > 0.0 ? 1 : 0;
    };
    subs.push_back(std::move(ba));

    CompactSub bb;
    bb.name = "Bb";
    bb.plane_eqs = [](const ParamCurve& f, double) -> Vec {
      return perp_right(f.plane_point(0.0) - f.plane_point(M_PI));
    };
    bb.decide = [](const ParamCurve& f, double, double margin_tol,
                   double* margin) {
      const double east =
          right_component(f.plane_point(0.0) - f.plane_point(M_PI));
      if (std::abs(east) < margin_tol)
        throw GenericityError("rightward-separation tie at base points");
      *margin = std::abs(east);
      return east > 0.0 ? 1 : 0;
    };
    subs.push_back(std::move(bb));
  } else if (cls == "C") {
    CompactSub ca;
    ca.name = "Ca";
    ca.has_alpha = true;
    ca.fold = M_PI / 2.0;
    ca.plane_eqs = [](const ParamCurve& f, double alpha) -> Vec {
      const Vec first = f.plane_point(alpha) - f.plane_point(alpha + M_PI);
      const Vec second = f.plane_point(alpha + M_PI / 2.0) -
                         f.plane_point(alpha + 1.5 * M_PI);
      Vec r(first.size() + second.size());
      r.head(first.size()) = first;
      r.tail(second.size()) = second;
      return r;
    };
    ca.decide = [](const ParamCurve& f, double alpha, double margin_tol,
                   double* margin) {
      const double c1 = f.height(alpha + M_PI) - f.height(alpha);
      const double c2 =
          f.height(alpha + M_PI / 2.0) - f.height(alpha + 1.5 * M_PI);
      if (std::min(std::abs(c1), std::abs(c2)) < margin_tol)
        throw GenericityError("height tie at a double coincidence");
      *margin = std::min(std::abs(c1), std::abs(c2));
      return (c1 > 0.0 && c2 > 0.0) ? 1 : 0;
    };
    subs.push_back(std::move(ca));

    CompactSub cb;
    cb.name = "Cb";
    cb.plane_eqs = [](const ParamCurve& f, double) -> Vec {
      const Vec first = f.plane_point(0.0) - f.plane_point(M_PI);
      const Vec second =
          perp_right(f.plane_point(M_PI / 2.0) - f.plane_point(1.5 * M_PI));
      Vec r(first.size() + second.size());
      r.head(first.size()) = first;
      r.tail(second.size()) = second;
      return r;
    };
    cb.decide = [](const ParamCurve& f, double, double margin_tol,
                   double* margin) {
      const double gap = f.height(M_PI) - f.height(0.0);
      const double east = right_component(f.plane_point(M_PI / 2.0) -
                                          f.plane_point(1.5 * M_PI));
      if (std::min(std::abs(gap), std::abs(east)) < margin_tol)
        throw GenericityError("height or rightward tie at quarter points");
      *margin = std::min(std::abs(gap), std::abs(east));
      return (gap > 0.0 && east > 0.0) ? 1 : 0;
    };
    subs.push_back(std::move(cb));
  }
  return subs;
}

bool same_compact_root(const Vec& a, const Vec& b, double radius,
                       const std::vector<std::pair<int, double>>& periodic) {
  const int m = static_cast<int>(periodic.size());
  int combos = 1;
  for (int i = 0; i < m; ++i) combos *= 3;
  for (int c = 0; c < combos; ++c) {
    Vec s = b;
    int code = c;
    for (int p = 0; p < m; ++p) {
      const int shift = code % 3 - 1;
      code /= 3;
      s(periodic[p].first) += shift * periodic[p].second;
    }
    if (same_root(a, s, radius)) return true;
  }
  return false;
}

EvalResult evaluate_compact_impl(const KnotCycle& cycle, const std::string& cls,
                                 const RunConfig& cfg) {
  const int n = cycle.n();
  if (n < 3) throw InputError("ambient dimension must be at least 3");
  const int class_dim = compact_class_dim(cls, n);
  if (cycle.curve_kind() != CurveKind::kCompact)
    throw InputError("classes A/B/C/D are evaluated on families of compact "
                     "curves");
  const int dim = cycle.domain().intrinsic_dim();
  if (dim != class_dim)
    throw InputError("class " + cls + " expects a family of dimension " +
                     std::to_string(class_dim) + ", got " +
                     std::to_string(dim));
  if (cls == "D") {
    if (n != 3)
      throw InputError(
          "class D is evaluated only in ambient dimension 3");
    return evaluate_degree3_point_family(cycle, cfg);
  }

  const int coord = cycle.domain().coord_dim;
  const int cons = cycle.domain().constraint_dim();
  const int threads = resolve_thread_count(cfg);
  std::vector<std::pair<int, double>> periodic;
  if (cycle.domain().kind == DomainKind::kCircle ||
      cycle.domain().kind == DomainKind::kTorus)
    for (int i = 0; i < coord; ++i)
      periodic.emplace_back(i, cycle.domain().period);

  std::vector<Event> events;
  for (const CompactSub& sub : compact_subsystems(cls)) {
    const int dim_x = coord + (sub.has_alpha ? 1 : 0);
    auto fn = [&cycle, &sub, coord, cons, dim_x](const Vec& x) {
      const Vec q = x.head(coord);
      const double alpha = sub.has_alpha ? x(coord) : 0.0;
      const ParamCurve f = cycle.frame(q);
      const Vec plane = sub.plane_eqs(f, alpha);
      Vec r(plane.size() + cons);
      r.head(plane.size()) = plane;
      if (cons) r.tail(cons) = cycle.constraints(q);
      if (r.size() != dim_x)
        throw std::logic_error("membership system is not square");
      return r;
    };
    const SquareSystem sys(sub.name, dim_x, fn);

    std::vector<Vec> seeds;
    for (const Vec& q : cycle.seed_points()) {
      if (!sub.has_alpha) {
        Vec s(dim_x);
        s.head(coord) = q;
        seeds.push_back(s);
      } else {
        for (int a = 0; a < kAlphaSeeds; ++a) {
          Vec s(dim_x);
          s.head(coord) = q;
          s(coord) = sub.fold * (a + 0.5) / kAlphaSeeds;
          seeds.push_back(s);
        }
      }
    }

    std::vector<Vec> slots(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), threads, [&](int i) {
      const NewtonOutcome out = solve_square(sys, seeds[i], cfg);
      if (out.converged) slots[i] = out.root;
    });

    std::vector<Vec> roots;
    for (const Vec& r : slots) {
      if (!r.size()) continue;
      Vec c(dim_x);
      c.head(coord) = cycle.canonical(r.head(coord));
      if (sub.has_alpha) c(coord) = wrap_into(r(coord), sub.fold);
      roots.push_back(std::move(c));
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    std::vector<std::pair<int, double>> periodic_x = periodic;
    if (sub.has_alpha) periodic_x.emplace_back(coord, sub.fold);
    std::vector<Vec> kept;
    for (const Vec& r : roots) {
      bool dup = false;
      for (const Vec& k : kept)
        if (same_compact_root(r, k, cfg.dedup_radius, periodic_x)) {
          dup = true;
          break;
        }
      if (!dup) kept.push_back(r);
    }

    for (const Vec& root : kept) {
      const RootStats st = stats_at(sys, root);
      if (st.cond > cfg.cond_threshold)
        throw GenericityError("ill-conditioned " + sub.name + " root");
      const ParamCurve f = cycle.frame(root.head(coord));
      double margin = 0.0;
      const int mult = sub.decide(f, sub.has_alpha ? root(coord) : 0.0,
                                  cfg.margin_tol, &margin);
      if (mult == 0) continue;  // decisively off the stratum
      events.push_back(make_event(sub.name, root, 1, st, margin));
    }
  }
  return finalize_result(std::move(events), cfg);
}

}  // namespace

long long evaluate_d3_direct(const ParamCurve& curve,
                             const CrossingOptions& opts) {
  const std::vector<Crossing> crossings = find_crossings(curve, opts);
  long long total = 0;
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    for (std::size_t j = 0; j < crossings.size(); ++j) {
      if (i == j) continue;
      const Crossing& x = crossings[i];  // visits at params x.s < x.t
      const Crossing& y = crossings[j];
      // Interleaved with x holding the smallest parameter: x.s < y.s < x.t < y.t.
      if (!(x.s < y.s && y.s < x.t && x.t < y.t)) continue;
      // Pattern: second visit of x on top, first visit of y on top.
      if (x.over_is_s || !y.over_is_s) continue;
      total += static_cast<long long>(x.diagram_sign()) *
               static_cast<long long>(y.diagram_sign());
    }
  }
  return total;
}

std::vector<SystemShape> shipped_system_shapes(int n) {
  if (n < 3) throw InputError("ambient dimension must be at least 3");
  std::vector<SystemShape> shapes;
  auto add = [&](const std::string& name, int equations, int class_dim,
                 int free_points) {
    shapes.push_back({name, equations, class_dim + free_points});
  };
  // Long-knot triple/tangency strata, class dimension 3n-8.
  const int tt = 3 * n - 8;
  add("Sa", 3 * (n - 1), tt, 5);
  add("Sb", 2 * (n - 1) + (n - 2), tt, 4);
  add("Sc", 2 * (n - 1) + (n > 3 ? n - 3 : 0), tt, 3);
  // Compact-knot classes.
  add("A", n - 1, n - 1, 0);
  add("Ba", n - 1, n - 2, 1);
  add("Bb", n - 2, n - 2, 0);
  add("Ca", 2 * (n - 1), 2 * n - 3, 1);
  add("Cb", (n - 1) + (n - 2), 2 * n - 3, 0);
  add("Da", 2 * (n - 1), 2 * n - 6, 4);
  if (n > 3) add("Db", (n - 1) + (n - 2), 2 * n - 6, 3);
  return shapes;
}

EvalResult evaluate_tt(const KnotCycle& cycle, const RunConfig& cfg) {
  return evaluate_tt_impl(cycle, cfg);
}

EvalResult evaluate_tt_blind(const KnotCycle& cycle, const RunConfig& cfg) {
  return evaluate_tt_blind_impl(cycle, cfg);
}

EvalResult evaluate_compact(const KnotCycle& cycle, const std::string& cls,
                            const RunConfig& cfg) {
  return evaluate_compact_impl(cycle, cls, cfg);
}

}  // namespace knotstrata
