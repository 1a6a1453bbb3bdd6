#include "knotstrata/strata.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace knotstrata {

int resolve_thread_count(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("KNOTSTRATA_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

Mat SquareSystem::jacobian(const Vec& x) const {
  Mat J(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    double h = 1e-6 * (1.0 + std::abs(x(j)));
    Vec xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (fn_(xp) - fn_(xm)) / (2.0 * h);
  }
  return J;
}

NewtonOutcome solve_square(const SquareSystem& sys, const Vec& seed,
                           const RunConfig& cfg) {
  NewtonOutcome out;
  Vec x = seed;
  const double scale = 1.0 + seed.norm();
  double fnorm = 0.0;
  try {
    fnorm = sys.residual(x).norm();
  } catch (const GenericityError&) {
    return out;
  }

  for (int it = 0; it < cfg.max_newton_iter; ++it) {
    out.iters = it;
    Vec f;
    try {
      f = sys.residual(x);
    } catch (const GenericityError&) {
      return out;
    }
    fnorm = f.norm();
    if (fnorm < cfg.newton_tol) break;
    Mat J = sys.jacobian(x);
    Eigen::PartialPivLU<Mat> lu(J);
    Vec step = lu.solve(-f);
    if (!step.allFinite()) return out;
    // Backtracking on the residual norm.
    double lambda = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 16; ++bt) {
      Vec xn = x + lambda * step;
      double fn;
      try {
        fn = sys.residual(xn).norm();
      } catch (const GenericityError&) {
        lambda *= 0.5;
        continue;
      }
      if (fn < fnorm * (1.0 - 1e-4 * lambda) || fn < cfg.newton_tol) {
        x = xn;
        fnorm = fn;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) return out;
    if (x.norm() > 1e6 * scale) return out;
  }
  if (fnorm >= cfg.newton_tol) return out;

  Mat J = sys.jacobian(x);
  Eigen::JacobiSVD<Mat> svd(J);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  out.cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<Mat> lu(J);
  double det = lu.determinant();
  out.sign = (det > 0) ? 1 : (det < 0 ? -1 : 0);
  out.converged = true;
  out.root = x;
  out.residual = fnorm;
  return out;
}

bool same_root(const Vec& a, const Vec& b, double radius) {
  if (a.size() != b.size()) return false;
  double scale = 1.0 + std::max(a.norm(), b.norm());
  return (a - b).norm() < radius * scale;
}

bool event_less(const Event& a, const Event& b) {
  if (a.family_param != b.family_param) return a.family_param < b.family_param;
  if (a.stratum != b.stratum) return a.stratum < b.stratum;
  const int n = static_cast<int>(std::min(a.location.size(), b.location.size()));
  for (int i = 0; i < n; ++i)
    if (a.location(i) != b.location(i)) return a.location(i) < b.location(i);
  return a.location.size() < b.location.size();
}

}  // namespace knotstrata
