#include "ptolemy/curves.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ptolemy/errors.hpp"
#include "ptolemy/textio.hpp"

namespace ptolemy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_eccentricity(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw InvalidEccentricity("eccentricity must lie in [0, 1), got " +
                              format_sig10(eps));
  }
}

double parse_real(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("malformed number: '" + std::string(token) + "'");
  }
  return value;
}

int parse_int(std::string_view token) {
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("malformed integer: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

double wrap_unit(double t) {
  double r = t - std::floor(t);
  // floor rounding can land exactly on 1 for tiny negative inputs
  return r < 1.0 ? r : 0.0;
}

bool is_strict_cyclic_order(double t1, double t2, double t3, double t4) {
  const double g1 = wrap_unit(t2 - t1);
  const double g2 = wrap_unit(t3 - t2);
  const double g3 = wrap_unit(t4 - t3);
  return g1 > 0.0 && g2 > 0.0 && g3 > 0.0 && g1 + g2 + g3 < 1.0;
}

CurveSpec CurveSpec::ellipse(double eccentricity) {
  check_eccentricity(eccentricity);
  CurveSpec c;
  c.kind_ = CurveKind::Ellipse;
  c.eccentricity_ = eccentricity;
  c.semi_minor_ = std::sqrt(1.0 - eccentricity * eccentricity);
  return c;
}

CurveSpec CurveSpec::rectangle(double eccentricity) {
  check_eccentricity(eccentricity);
  CurveSpec c;
  c.kind_ = CurveKind::Rectangle;
  c.eccentricity_ = eccentricity;
  c.semi_minor_ = std::sqrt(1.0 - eccentricity * eccentricity);
  return c;
}

CurveSpec CurveSpec::regular_polygon(int sides) {
  if (sides < 3) {
    throw std::invalid_argument("regular polygon needs at least 3 sides");
  }
  CurveSpec c;
  c.kind_ = CurveKind::RegularPolygon;
  c.sides_ = sides;
  return c;
}

CurveSpec CurveSpec::reuleaux() {
  CurveSpec c;
  c.kind_ = CurveKind::Reuleaux;
  return c;
}

CurveSpec CurveSpec::convex_polygon(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) {
    throw std::invalid_argument("convex polygon needs at least 3 vertices");
  }
  for (const Point2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("convex polygon vertex is not finite");
    }
  }
  // strict convexity, counterclockwise: every consecutive edge pair must turn
  // left; this also rejects repeated and collinear vertices
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % n];
    const Point2& c = vertices[(i + 2) % n];
    const double cross =
        (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (!(cross > 0.0)) {
      throw std::invalid_argument(
          "vertices must be strictly convex and counterclockwise");
    }
  }
  CurveSpec c;
  c.kind_ = CurveKind::ConvexPolygon;
  c.vertices_ = std::move(vertices);
  c.cum_length_.resize(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    c.cum_length_[i + 1] =
        c.cum_length_[i] + dist(c.vertices_[i], c.vertices_[(i + 1) % n]);
  }
  return c;
}

Point2 point_at(const CurveSpec& curve, double t) {
  const double u = wrap_unit(t);
  switch (curve.kind_) {
    case CurveKind::Ellipse: {
      const double theta = kTwoPi * u;
      return {std::cos(theta), curve.semi_minor_ * std::sin(theta)};
    }
    case CurveKind::Rectangle: {
      const double b = curve.semi_minor_;
      const double s = u * (4.0 + 4.0 * b);  // arc length from (1, 0), ccw
      if (s < b) return {1.0, s};
      if (s < b + 2.0) return {1.0 - (s - b), b};
      if (s < 3.0 * b + 2.0) return {-1.0, b - (s - b - 2.0)};
      if (s < 3.0 * b + 4.0) return {-1.0 + (s - 3.0 * b - 2.0), -b};
      return {1.0, -b + (s - 3.0 * b - 4.0)};
    }
    case CurveKind::RegularPolygon: {
      const int n = curve.sides_;
      // equal edges, so arc-length fraction is uniform per edge
      double s = u * n;
      int k = static_cast<int>(s);
      if (k >= n) k = n - 1;
      const double w = s - k;
      const double a0 = kTwoPi * k / n;
      const double a1 = kTwoPi * ((k + 1) % n) / n;
      const Point2 p0{std::cos(a0), std::sin(a0)};
      const Point2 p1{std::cos(a1), std::sin(a1)};
      return {p0.x + w * (p1.x - p0.x), p0.y + w * (p1.y - p0.y)};
    }
    case CurveKind::Reuleaux: {
      // width 2: equilateral triangle of side 2 centered at the centroid,
      // vertices at circumradius 2/sqrt(3), each arc of radius 2 centered at
      // the opposite vertex and spanning pi/3
      const double circumradius = 2.0 / std::sqrt(3.0);
      double s = u * 3.0;
      int arc = static_cast<int>(s);
      if (arc >= 3) arc = 2;
      const double w = s - arc;
      const double center_angle = kTwoPi * ((arc + 2) % 3) / 3.0;
      const Point2 center{circumradius * std::cos(center_angle),
                          circumradius * std::sin(center_angle)};
      const double phi =
          std::numbers::pi / 6.0 + kTwoPi * arc / 3.0 + w * std::numbers::pi / 3.0;
      return {center.x + 2.0 * std::cos(phi), center.y + 2.0 * std::sin(phi)};
    }
    case CurveKind::ConvexPolygon: {
      const std::size_t n = curve.vertices_.size();
      const double total = curve.cum_length_.back();
      const double s = u * total;
      std::size_t lo = 0, hi = n;
      while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (curve.cum_length_[mid] <= s) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double seg = curve.cum_length_[lo + 1] - curve.cum_length_[lo];
      const double w = seg > 0.0 ? (s - curve.cum_length_[lo]) / seg : 0.0;
      const Point2& p0 = curve.vertices_[lo];
      const Point2& p1 = curve.vertices_[(lo + 1) % n];
      return {p0.x + w * (p1.x - p0.x), p0.y + w * (p1.y - p0.y)};
    }
  }
  return {};  // unreachable
}

CurveSpec CurveSpec::parse(std::string_view text) {
  if (text == "reuleaux") return reuleaux();
  if (text.rfind("ellipse:", 0) == 0) {
    return ellipse(parse_real(text.substr(8)));
  }
  if (text.rfind("rectangle:", 0) == 0) {
    return rectangle(parse_real(text.substr(10)));
  }
  if (text.rfind("polygon:", 0) == 0) {
    return regular_polygon(parse_int(text.substr(8)));
  }
  if (text.rfind("convex:", 0) == 0) {
    std::vector<Point2> verts;
    std::string_view rest = text.substr(7);
    while (!rest.empty()) {
      const std::size_t semi = rest.find(';');
      std::string_view pair =
          semi == std::string_view::npos ? rest : rest.substr(0, semi);
      rest = semi == std::string_view::npos ? std::string_view{}
                                            : rest.substr(semi + 1);
      const std::size_t comma = pair.find(',');
      if (comma == std::string_view::npos) {
        throw std::invalid_argument("convex vertex must be 'x,y'");
      }
      verts.push_back(
          {parse_real(pair.substr(0, comma)), parse_real(pair.substr(comma + 1))});
    }
    return convex_polygon(std::move(verts));
  }
  throw std::invalid_argument("unrecognized curve: '" + std::string(text) + "'");
}

std::string CurveSpec::to_string() const {
  switch (kind_) {
    case CurveKind::Ellipse:
      return "ellipse:" + format_sig10(eccentricity_);
    case CurveKind::Rectangle:
      return "rectangle:" + format_sig10(eccentricity_);
    case CurveKind::RegularPolygon:
      return "polygon:" + std::to_string(sides_);
    case CurveKind::Reuleaux:
      return "reuleaux";
    case CurveKind::ConvexPolygon: {
      std::string out = "convex:";
      for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (i > 0) out += ';';
        out += format_sig10(vertices_[i].x);
        out += ',';
        out += format_sig10(vertices_[i].y);
      }
      return out;
    }
  }
  return {};
}

}  // namespace ptolemy
