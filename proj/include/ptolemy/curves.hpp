#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ptolemy/point.hpp"

namespace ptolemy {

enum class CurveKind { Ellipse, Rectangle, RegularPolygon, Reuleaux, ConvexPolygon };

/// A planar simple closed curve with a 1-periodic boundary parameterization,
/// traversed counterclockwise.
///
/// Normalization: the horizontal semi-axis / half-width is 1. For eccentricity
/// eps in [0, 1) the semi-minor length is b = sqrt(1 - eps^2), so the ellipse
/// is x^2 + y^2/b^2 = 1 and the rectangle is max{|x|, |y|/b} = 1. Regular
/// polygons have unit circumradius with the first vertex at (1, 0); the
/// Reuleaux triangle has width 2 and is centered at its centroid with one
/// vertex on the positive x axis.
///
/// Parameter convention: the ellipse uses the angular parameter theta = 2*pi*t
/// (so t = 0.25 is the top of the minor axis); every other curve uses
/// arc-length fraction from a fixed start point: (1, 0) for the rectangle,
/// the first vertex for polygons and the Reuleaux triangle.
class CurveSpec {
 public:
  static CurveSpec ellipse(double eccentricity);
  static CurveSpec rectangle(double eccentricity);
  static CurveSpec regular_polygon(int sides);
  static CurveSpec reuleaux();
  static CurveSpec convex_polygon(std::vector<Point2> vertices);

  /// Canonical text form used by the CLI: "ellipse:EPS", "rectangle:EPS",
  /// "polygon:N", "reuleaux", "convex:x1,y1;x2,y2;...".
  static CurveSpec parse(std::string_view text);
  std::string to_string() const;

  CurveKind kind() const { return kind_; }
  double eccentricity() const { return eccentricity_; }
  /// b = sqrt(1 - eps^2); meaningful for ellipse and rectangle.
  double semi_minor() const { return semi_minor_; }
  int sides() const { return sides_; }
  const std::vector<Point2>& vertices() const { return vertices_; }

 private:
  CurveSpec() = default;

  CurveKind kind_ = CurveKind::Ellipse;
  double eccentricity_ = 0.0;
  double semi_minor_ = 1.0;
  int sides_ = 0;
  std::vector<Point2> vertices_;    // convex polygon only
  std::vector<double> cum_length_;  // cumulative edge lengths, convex polygon only

  friend Point2 point_at(const CurveSpec&, double);
};

/// Boundary point at parameter t, interpreted modulo 1. Total and 1-periodic.
Point2 point_at(const CurveSpec& curve, double t);

/// True iff the four parameters are pairwise distinct modulo 1 and occur in
/// counterclockwise cyclic order t1 -> t2 -> t3 -> t4.
bool is_strict_cyclic_order(double t1, double t2, double t3, double t4);

/// t reduced to [0, 1).
double wrap_unit(double t);

}  // namespace ptolemy
