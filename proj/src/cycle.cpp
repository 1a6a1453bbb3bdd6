#include "knotstrata/cycle.hpp"

#include <cmath>

namespace knotstrata {

Vec KnotCycle::canonical(const Vec& u) const {
  Vec v = u;
  switch (dom_.kind) {
    case DomainKind::kCircle:
    case DomainKind::kTorus: {
      for (int i = 0; i < v.size(); ++i) {
        double w = std::fmod(v(i), dom_.period);
        if (w < 0) w += dom_.period;
        v(i) = w;
      }
      break;
    }
    case DomainKind::kSO3: {
      double norm = v.norm();
      if (norm > 0) v /= norm;
      for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
          if (v(i) < 0) v = -v;
          break;
        }
      }
      break;
    }
    case DomainKind::kS3: {
      double norm = v.norm();
      if (norm > 0) v /= norm;
      break;
    }
    case DomainKind::kBox:
      break;
  }
  return v;
}

std::vector<Vec> KnotCycle::seed_points() const {
  std::vector<Vec> seeds;
  switch (dom_.kind) {
    case DomainKind::kCircle: {
      int m = dom_.grid.empty() ? 64 : dom_.grid[0];
      for (int i = 0; i < m; ++i) {
        Vec u(1);
        u(0) = dom_.period * i / m;
        seeds.push_back(u);
      }
      break;
    }
    case DomainKind::kTorus: {
      std::vector<int> g(dom_.coord_dim, 16);
      for (size_t i = 0; i < dom_.grid.size() && i < g.size(); ++i)
        g[i] = dom_.grid[i];
      std::vector<int> idx(dom_.coord_dim, 0);
      while (true) {
        Vec u(dom_.coord_dim);
        for (int i = 0; i < dom_.coord_dim; ++i)
          u(i) = dom_.period * idx[i] / g[i];
        seeds.push_back(u);
        int d = 0;
        while (d < dom_.coord_dim && ++idx[d] == g[d]) idx[d++] = 0;
        if (d == dom_.coord_dim) break;
      }
      break;
    }
    case DomainKind::kSO3:
    case DomainKind::kS3: {
      // Deterministic grid on the quaternion cube, normalized to the sphere.
      int m = dom_.grid.empty() ? 5 : dom_.grid[0];
      double dedup = 0.5 / m;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d) {
              Vec q(4);
              q << -1.0 + 2.0 * (a + 0.5) / m, -1.0 + 2.0 * (b + 0.5) / m,
                  -1.0 + 2.0 * (c + 0.5) / m, -1.0 + 2.0 * (d + 0.5) / m;
              if (q.norm() < 0.2) continue;
              q = canonical(q);
              bool dup = false;
              for (const auto& p : seeds) {
                if ((p - q).norm() < dedup) {
                  dup = true;
                  break;
                }
              }
              if (!dup) seeds.push_back(q);
            }
      break;
    }
    case DomainKind::kBox: {
      std::vector<int> g(dom_.coord_dim, 8);
      for (size_t i = 0; i < dom_.grid.size() && i < g.size(); ++i)
        g[i] = dom_.grid[i];
      std::vector<int> idx(dom_.coord_dim, 0);
      while (true) {
        Vec u(dom_.coord_dim);
        for (int i = 0; i < dom_.coord_dim; ++i) {
          double lo = dom_.box_lo.empty() ? 0.0 : dom_.box_lo[i];
          double hi = dom_.box_hi.empty() ? 1.0 : dom_.box_hi[i];
          u(i) = lo + (hi - lo) * (idx[i] + 0.5) / g[i];
        }
        seeds.push_back(u);
        int d = 0;
        while (d < dom_.coord_dim && ++idx[d] == g[d]) idx[d++] = 0;
        if (d == dom_.coord_dim) break;
      }
      break;
    }
  }
  return seeds;
}

KnotCycle single_curve_cycle(const ParamCurve& curve) {
  CycleDomain dom;
  dom.kind = DomainKind::kBox;
  dom.coord_dim = 0;
  return KnotCycle(dom, curve.n(), curve.kind(),
                   [curve](const Vec&) { return curve; });
}

}  // namespace knotstrata
