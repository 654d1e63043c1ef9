#pragma once

#include <cmath>

namespace ptolemy {

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

/// Eccentricity at which the rectangle constant switches branch: sqrt(3)/2,
/// the 2x1 rectangle.
inline const double rectangle_transition_eps = std::sqrt(3.0) / 2.0;

/// Conjectured Ptolemy constant of the ellipse: (2 - eps^2) / (2*sqrt(1 - eps^2)).
double ellipse_constant(double eps);

/// Proven sandwich for the ellipse constant:
/// lower = (1/sqrt(1-eps^2) + sqrt(1-eps^2)) / 2, which equals
/// ellipse_constant algebraically, and upper = csc(pi*sqrt(1-eps^2)/2).
BoundPair ellipse_bounds(double eps);

/// Conjectured Ptolemy constant of the rectangle max{|x|, |y|/b} = 1:
/// sqrt(2) for eps <= sqrt(3)/2, and the steep branch beyond. Continuous at
/// the transition.
double rectangle_constant(double eps);

/// The steep branch sqrt(1 + 4*(1-eps^2)) / (2*sqrt(1-eps^2)), defined on all
/// of [0, 1) so the two branches can be compared near the transition.
double rectangle_steep_branch(double eps);

/// Ptolemy ratio of the rectangle's shrinking-gap vertex family
///   v1 = (1, b), v2 = (-1, delta - b), v3 = (-1, -b), v4 = (delta - 1, -b),
/// b = sqrt(1 - eps^2), evaluated in the delta-cancelled form
///   [sqrt(4 + (delta-2b)^2) + sqrt((delta-2)^2 + 4b^2)] / (sqrt(4+4b^2)*sqrt(2))
/// which stays stable for delta down to 1e-12. Tends to sqrt(2) as
/// delta -> 0+. Requires 0 <= eps <= sqrt(3)/2 and 0 < delta <= 2b.
double rectangle_limit_family(double eps, double delta);

}  // namespace ptolemy
