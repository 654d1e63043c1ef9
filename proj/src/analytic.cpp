#include "ptolemy/analytic.hpp"

#include <cmath>
#include <numbers>

#include "ptolemy/errors.hpp"
#include "ptolemy/textio.hpp"

namespace ptolemy {

namespace {

double semi_minor_checked(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw InvalidEccentricity("eccentricity must lie in [0, 1), got " +
                              format_sig10(eps));
  }
  return std::sqrt(1.0 - eps * eps);
}

}  // namespace

double ellipse_constant(double eps) {
  const double b = semi_minor_checked(eps);
  return (2.0 - eps * eps) / (2.0 * b);
}

BoundPair ellipse_bounds(double eps) {
  const double b = semi_minor_checked(eps);
  // csc argument built from b directly; avoids cancellation as eps -> 1
  return {0.5 * (1.0 / b + b), 1.0 / std::sin(std::numbers::pi * b / 2.0)};
}

double rectangle_steep_branch(double eps) {
  const double b = semi_minor_checked(eps);
  return std::sqrt(1.0 + 4.0 * b * b) / (2.0 * b);
}

double rectangle_constant(double eps) {
  semi_minor_checked(eps);
  if (eps <= rectangle_transition_eps) return std::numbers::sqrt2;
  return rectangle_steep_branch(eps);
}

double rectangle_limit_family(double eps, double delta) {
  if (!(eps >= 0.0 && eps <= rectangle_transition_eps)) {
    throw InvalidEccentricity(
        "limit family requires 0 <= eps <= sqrt(3)/2, got " + format_sig10(eps));
  }
  const double b = std::sqrt(1.0 - eps * eps);
  const double delta_max = std::min(2.0, 2.0 * b);
  if (!(delta > 0.0 && delta <= delta_max)) {
    throw InvalidDelta("delta must lie in (0, " + format_sig10(delta_max) +
                       "], got " + format_sig10(delta));
  }
  const double side_left = std::sqrt(4.0 + (delta - 2.0 * b) * (delta - 2.0 * b));
  const double side_diag = std::sqrt((delta - 2.0) * (delta - 2.0) + 4.0 * b * b);
  return (side_left + side_diag) /
         (std::sqrt(4.0 + 4.0 * b * b) * std::numbers::sqrt2);
}

}  // namespace ptolemy
