#pragma once

// A cycle of knots: a smooth family of parametrized curves indexed by a
// closed domain (circle, torus, SO(3), S^3, or a box chart).  The family is
// presented through a generator callback; solvers work in explicit embedding
// coordinates (angles, box coordinates, or unit quaternions with their norm
// constraint appended to the equation systems).

#include <functional>
#include <vector>

#include "knotstrata/curve.hpp"

namespace knotstrata {

enum class DomainKind { kCircle, kTorus, kSO3, kS3, kBox };

struct CycleDomain {
  DomainKind kind = DomainKind::kCircle;
  int coord_dim = 1;  // embedding coordinates handed to the generator
  double period = 1.0;
  std::vector<double> box_lo, box_hi;
  std::vector<int> grid;  // seeding resolution hints

  // Unit-quaternion domains carry one norm constraint.
  int constraint_dim() const {
    return (kind == DomainKind::kSO3 || kind == DomainKind::kS3) ? 1 : 0;
  }

  // Intrinsic manifold dimension (the k in the squareness bookkeeping).
  int intrinsic_dim() const {
    switch (kind) {
      case DomainKind::kCircle:
        return 1;
      case DomainKind::kTorus:
      case DomainKind::kBox:
        return coord_dim;
      case DomainKind::kSO3:
      case DomainKind::kS3:
        return 3;
    }
    return coord_dim;
  }
};

class KnotCycle {
 public:
  using Generator = std::function<ParamCurve(const Vec&)>;

  KnotCycle(CycleDomain dom, int ambient_n, CurveKind kind, Generator gen)
      : dom_(std::move(dom)), n_(ambient_n), kind_(kind), gen_(std::move(gen)) {}

  const CycleDomain& domain() const { return dom_; }
  int n() const { return n_; }
  CurveKind curve_kind() const { return kind_; }

  ParamCurve frame(const Vec& u) const { return gen_(u); }

  // Norm constraints for quaternion charts (empty otherwise).
  Vec constraints(const Vec& u) const {
    Vec out(dom_.constraint_dim());
    if (dom_.constraint_dim() == 1) out(0) = u.squaredNorm() - 1.0;
    return out;
  }

  // Fold a coordinate vector into the canonical fundamental domain:
  // wrap angles; normalize quaternions; fold the SO(3) double cover.
  Vec canonical(const Vec& u) const;

  // Deterministic seeding grid over the domain.
  std::vector<Vec> seed_points() const;

 private:
  CycleDomain dom_;
  int n_;
  CurveKind kind_;
  Generator gen_;
};

// A zero-dimensional family holding one fixed curve (for classes whose
// expected cycle dimension is 0, e.g. the degree-3 compact class at n = 3).
KnotCycle single_curve_cycle(const ParamCurve& curve);

}  // namespace knotstrata
