#include "ptolemy/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ptolemy/errors.hpp"
#include "ptolemy/jacobi.hpp"

namespace ptolemy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Differentiation happens in the curve's derivative coordinates: theta
// (radians) on the ellipse so the numbers compare directly against the
// analytic Hessian, plain t elsewhere. The step h is in those coordinates;
// this returns the equivalent t shift per unit of h.
double step_to_t(const CurveSpec& curve) {
  return curve.kind() == CurveKind::Ellipse ? 1.0 / kTwoPi : 1.0;
}

void check_fd_step(const QuadParams& q, double h_t) {
  if (!(h_t > 0.0)) throw StepTooLarge("finite-difference step must be positive");
  if (!q.strictly_ordered()) {
    throw StepTooLarge("tuple is not in strict cyclic order");
  }
  for (double g : q.gaps()) {
    if (!(g > 2.0 * h_t)) {
      throw StepTooLarge("step too large: a cyclic gap does not exceed 2h");
    }
  }
}

double eval_shifted(const CurveSpec& curve, QuadParams q, int i, double di,
                    int j, double dj) {
  q.t[i] += di;
  q.t[j] += dj;
  return ratio_on_curve(curve, q);
}

}  // namespace

double Matrix4::max_abs() const {
  double m = 0.0;
  for (const auto& row : a)
    for (double v : row) m = std::max(m, std::fabs(v));
  return m;
}

bool Matrix4::is_symmetric(double tol) const {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::fabs(a[i][j] - a[j][i]) > tol) return false;
  return true;
}

double ptolemy_ratio(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double ac = dist(a, c);
  const double bd = dist(b, d);
  if (ac == 0.0) throw DegenerateQuadrilateral("ac");
  if (bd == 0.0) throw DegenerateQuadrilateral("bd");
  return (dist(a, b) * dist(c, d) + dist(a, d) * dist(b, c)) / (ac * bd);
}

double ratio_on_curve(const CurveSpec& curve, const QuadParams& q) {
  return ptolemy_ratio(point_at(curve, q.t[0]), point_at(curve, q.t[1]),
                       point_at(curve, q.t[2]), point_at(curve, q.t[3]));
}

std::array<double, 4> gradient_fd(const CurveSpec& curve, const QuadParams& q,
                                  double h) {
  const double dt = h * step_to_t(curve);
  check_fd_step(q, dt);
  std::array<double, 4> grad{};
  for (int i = 0; i < 4; ++i) {
    const double fp = eval_shifted(curve, q, i, dt, i, 0.0);
    const double fm = eval_shifted(curve, q, i, -dt, i, 0.0);
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Matrix4 hessian_fd(const CurveSpec& curve, const QuadParams& q, double h) {
  const double dt = h * step_to_t(curve);
  check_fd_step(q, dt);
  const double f0 = ratio_on_curve(curve, q);
  Matrix4 hess;
  for (int i = 0; i < 4; ++i) {
    const double fp = eval_shifted(curve, q, i, dt, i, 0.0);
    const double fm = eval_shifted(curve, q, i, -dt, i, 0.0);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double fpp = eval_shifted(curve, q, i, dt, j, dt);
      const double fpm = eval_shifted(curve, q, i, dt, j, -dt);
      const double fmp = eval_shifted(curve, q, i, -dt, j, dt);
      const double fmm = eval_shifted(curve, q, i, -dt, j, -dt);
      const double mixed = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      hess(i, j) = mixed;
      hess(j, i) = mixed;
    }
  }
  // already symmetric by construction; the averaging keeps that explicit
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double avg = 0.5 * (hess(i, j) + hess(j, i));
      hess(i, j) = avg;
      hess(j, i) = avg;
    }
  }
  return hess;
}

Matrix4 ellipse_hessian_closed_form(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw InvalidEccentricity("eccentricity must lie in [0, 1)");
  }
  const double e2 = eps * eps;
  const double b2 = 1.0 - e2;
  const double prefactor = -(e2 * e2) / (8.0 * std::sqrt(b2));
  const double diag_odd = (3.0 - e2) / (2.0 - e2);
  const double diag_even = (3.0 - 2.0 * e2) / ((2.0 - e2) * b2);
  const double off_odd = b2 / (2.0 - e2);
  const double off_even = 1.0 / ((2.0 - e2) * b2);
  Matrix4 m;
  m(0, 0) = m(2, 2) = prefactor * diag_odd;
  m(1, 1) = m(3, 3) = prefactor * diag_even;
  m(0, 2) = m(2, 0) = prefactor * off_odd;
  m(1, 3) = m(3, 1) = prefactor * off_even;
  return m;
}

const char* to_string(CriticalPointKind kind) {
  switch (kind) {
    case CriticalPointKind::Maximum:
      return "Maximum";
    case CriticalPointKind::Minimum:
      return "Minimum";
    case CriticalPointKind::Saddle:
      return "Saddle";
    case CriticalPointKind::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

CriticalPointKind second_derivative_test(const Matrix4& hessian) {
  const double tau = std::max(1e-10 * hessian.max_abs(), 1e-14);
  const auto eig = symmetric_eigenvalues(hessian);
  bool has_pos = false, has_neg = false, has_zero = false;
  for (double ev : eig) {
    if (ev > tau) {
      has_pos = true;
    } else if (ev < -tau) {
      has_neg = true;
    } else {
      has_zero = true;
    }
  }
  if (has_zero) return CriticalPointKind::Inconclusive;
  if (has_pos && has_neg) return CriticalPointKind::Saddle;
  return has_neg ? CriticalPointKind::Maximum : CriticalPointKind::Minimum;
}

}  // namespace ptolemy
