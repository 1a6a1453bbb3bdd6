#pragma once

// Square nonlinear systems cut out by stratum membership conditions, a damped
// Newton solver with finite-difference Jacobians, and the event records
// produced when a one-parameter family crosses a stratum.

#include <functional>
#include <string>
#include <vector>

#include "knotstrata/cycle.hpp"

namespace knotstrata {

// Numerical policy shared by every evaluation; overridable from the CLI.
struct RunConfig {
  double newton_tol = 1e-10;
  double dedup_radius = 1e-6;
  double margin_tol = 1e-8;
  double cond_threshold = 1e8;
  int max_newton_iter = 80;
  int threads = 0;  // 0 = KNOTSTRATA_THREADS env or hardware concurrency
  int frames = 0;   // frame count for tracking; 0 = domain grid hint
  unsigned long long seed = 12345;  // RNG seed for perturbation-style tests
};

int resolve_thread_count(const RunConfig& cfg);

class SquareSystem {
 public:
  using Fn = std::function<Vec(const Vec&)>;
  SquareSystem(std::string name, int dim, Fn fn)
      : name_(std::move(name)), dim_(dim), fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  Vec residual(const Vec& x) const { return fn_(x); }
  Mat jacobian(const Vec& x) const;  // central finite differences

 private:
  std::string name_;
  int dim_;
  Fn fn_;
};

struct NewtonOutcome {
  bool converged = false;
  Vec root;
  double residual = 0.0;
  double cond = 0.0;  // Jacobian condition number at the root
  int sign = 0;       // sign of det(Jacobian) at the root
  int iters = 0;
};

NewtonOutcome solve_square(const SquareSystem& sys, const Vec& seed,
                           const RunConfig& cfg);

bool same_root(const Vec& a, const Vec& b, double radius);

// A transversal intersection of the family with a stratum.
struct Event {
  std::string stratum;        // "Sa", "Sb", "Sc", "A", "Ba", "Bb", "Ca", ...
  double family_param = 0.0;  // principal family coordinate
  Vec location;               // full root vector of the membership system
  int multiplicity = 1;       // completer count where the stratum has one
  int jacobian_sign = 0;
  double margin = 0.0;  // distance to the nearest inequality boundary
  double residual = 0.0;
  double cond = 0.0;
};

// Canonical deterministic ordering (family param, stratum, location).
bool event_less(const Event& a, const Event& b);

}  // namespace knotstrata
