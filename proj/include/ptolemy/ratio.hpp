#pragma once

#include <array>

#include "ptolemy/curves.hpp"
#include "ptolemy/point.hpp"

namespace ptolemy {

/// An ordered quadruple of boundary parameters. Valid instances satisfy
/// is_strict_cyclic_order(t[0], t[1], t[2], t[3]).
struct QuadParams {
  std::array<double, 4> t{};

  bool strictly_ordered() const {
    return is_strict_cyclic_order(t[0], t[1], t[2], t[3]);
  }

  /// The four cyclic gaps (t2-t1, t3-t2, t4-t3, t1-t4), each reduced mod 1.
  std::array<double, 4> gaps() const {
    return {wrap_unit(t[1] - t[0]), wrap_unit(t[2] - t[1]),
            wrap_unit(t[3] - t[2]), wrap_unit(t[0] - t[3])};
  }
};

struct Matrix4 {
  std::array<std::array<double, 4>, 4> a{};

  double& operator()(int i, int j) { return a[i][j]; }
  double operator()(int i, int j) const { return a[i][j]; }

  double max_abs() const;
  bool is_symmetric(double tol) const;
};

/// The Ptolemy ratio (|ab||cd| + |ad||bc|) / (|ac||bd|). At least 1 for any
/// four points in the plane, with equality exactly for concyclic quadruples
/// taken in cyclic order. Throws DegenerateQuadrilateral when a diagonal
/// vanishes.
double ptolemy_ratio(Point2 a, Point2 b, Point2 c, Point2 d);

/// ptolemy_ratio of the four boundary points point_at(curve, t_k).
double ratio_on_curve(const CurveSpec& curve, const QuadParams& q);

/// Central-difference gradient of ratio_on_curve with respect to the four
/// parameters, taken in the curve's derivative coordinates: theta (radians)
/// on the ellipse, plain t elsewhere. h is a step in those coordinates; the
/// cyclic gaps of q must exceed twice the equivalent t step, otherwise
/// StepTooLarge.
std::array<double, 4> gradient_fd(const CurveSpec& curve, const QuadParams& q,
                                  double h);

/// Second-order central-difference Hessian, same units and preconditions as
/// gradient_fd; symmetrized by averaging with its transpose.
Matrix4 hessian_fd(const CurveSpec& curve, const QuadParams& q, double h);

/// The analytic Hessian of the ratio on an ellipse of eccentricity eps, taken
/// in theta coordinates at the critical tuple (0, pi/2, pi, 3*pi/2):
/// prefactor -eps^4 / (8*sqrt(1-eps^2)) times a sparse symmetric pattern.
Matrix4 ellipse_hessian_closed_form(double eps);

enum class CriticalPointKind { Maximum, Minimum, Saddle, Inconclusive };

const char* to_string(CriticalPointKind kind);

/// Classifies a symmetric Hessian by eigenvalue signs with threshold
/// tau = max(1e-10 * max|entry|, 1e-14): all below -tau -> Maximum, all above
/// tau -> Minimum, both signs -> Saddle, otherwise Inconclusive.
CriticalPointKind second_derivative_test(const Matrix4& hessian);

}  // namespace ptolemy
