#pragma once

// Ambient conventions shared by every module.
//
// The ambient space is R^n, n >= 3.  Two distinguished directions are fixed
// once and for all:
//   up    = e1  (the "vertical" axis; heights are measured along it)
//   right = e2  (the preferred horizontal ray)
// The diagram plane is R^{n-1}, reached by dropping the first coordinate.
// "x lies above y" means p(x) == p(y) and <x - y, up> > 0.
//
// In plane coordinates (indices 0..n-2 after projection) the image of
// "right" is the plane's first axis; the components of a plane vector
// orthogonal to the right ray are its remaining n-2 coordinates.

#include <Eigen/Dense>

#include <vector>

namespace knotstrata {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec up_direction(int n) {
  Vec u = Vec::Zero(n);
  u(0) = 1.0;
  return u;
}

inline Vec right_direction(int n) {
  Vec r = Vec::Zero(n);
  r(1) = 1.0;
  return r;
}

// Drop the first coordinate: R^n -> R^{n-1}.
inline Vec project(const Vec& x) { return x.tail(x.size() - 1); }

// Signed height difference <x - y, up>.
inline double height_gap(const Vec& x, const Vec& y) { return x(0) - y(0); }

// Component of a plane vector along the image of "right".
inline double right_component(const Vec& plane_vec) { return plane_vec(0); }

// Components of a plane vector orthogonal to the right ray (n-2 scalars).
inline Vec perp_right(const Vec& plane_vec) {
  return plane_vec.tail(plane_vec.size() - 1);
}

// Orientation sign of a 2x2 frame (a, b) in the plane (n == 3 diagrams).
inline int frame_sign(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  double det = a.x() * b.y() - a.y() * b.x();
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

// Row-stacking conversions between point lists and sample matrices.
inline Mat stack_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Mat(0, 0);
  Mat m(static_cast<int>(rows.size()), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<int>(i)) = rows[i].transpose();
  return m;
}

inline std::vector<Vec> unstack_rows(const Mat& m) {
  std::vector<Vec> rows(m.rows());
  for (int i = 0; i < m.rows(); ++i) rows[i] = m.row(i).transpose();
  return rows;
}

}  // namespace knotstrata
