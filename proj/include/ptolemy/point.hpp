#pragma once

#include <cmath>

namespace ptolemy {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace ptolemy
