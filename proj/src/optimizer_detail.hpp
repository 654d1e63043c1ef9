#pragma once

// Internals shared by the parallel optimizer kernels and their serial
// reference implementations.

#include <stdexcept>
#include <vector>

#include "ptolemy/optimizer.hpp"

namespace ptolemy::detail {

// Strict total order on grid candidates: larger value first, ties broken by
// the lexicographically smallest tuple. Grid tuples are pairwise distinct, so
// every scan has a unique winner regardless of evaluation order.
inline bool better_candidate(const GridCandidate& lhs, const GridCandidate& rhs) {
  if (lhs.value != rhs.value) return lhs.value > rhs.value;
  return lhs.q.t < rhs.q.t;
}

inline void check_grid_resolution(int n) {
  if (n < 8) throw std::invalid_argument("grid resolution must be at least 8");
}

inline std::vector<Point2> grid_points(const CurveSpec& curve, int n) {
  std::vector<Point2> pts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    pts[static_cast<std::size_t>(k)] =
        point_at(curve, static_cast<double>(k) / n);
  }
  return pts;
}

}  // namespace ptolemy::detail
