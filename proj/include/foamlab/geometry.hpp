#pragma once

// Circular-arc primitives, oriented circles/lines and Moebius maps.
//
// Conventions used throughout the library:
//  * An Arc is stored as (tail, head, bulge). The bulge is the signed area
//    between the arc and its chord. A positive bulge means the arc lies to
//    the right of the directed chord tail->head, so it adds area to the
//    region on the left and the arc turns counterclockwise.
//  * phi is the signed half-angle of the arc: the tangent at the tail is the
//    chord direction rotated by -phi and the tangent at the head is the chord
//    direction rotated by +phi. The total turning is 2*phi, |phi| < pi.
//  * Signed curvature is 2 sin(phi) / chord, positive for counterclockwise
//    turning.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "foamlab/errors.hpp"

namespace foamlab {

using Complex = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point() = default;
  constexpr Point(double x_, double y_) : x(x_), y(y_) {}
  explicit Point(Complex z) : x(z.real()), y(z.imag()) {}

  Complex to_complex() const { return {x, y}; }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }

  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
  Point& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator-(Point a) { return {-a.x, -a.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline double angle_of(Point a) { return std::atan2(a.y, a.x); }
// Counterclockwise quarter turn.
inline Point perp(Point a) { return {-a.y, a.x}; }
inline Point rotate(Point a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Point unit(Point a) {
  const double n = norm(a);
  return {a.x / n, a.y / n};
}
inline Point unit_from_angle(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Signed angle that rotates direction `from` onto direction `to`.
inline double signed_angle(Point from, Point to) {
  return std::atan2(cross(from, to), dot(from, to));
}

// ---------------------------------------------------------------------------
// Segment area <-> half-angle

// Area between an arc of half-angle phi and its chord of length c:
// c^2 (phi - sin phi cos phi) / (4 sin^2 phi).
inline double segment_area(double phi, double chord) {
  const double c2 = chord * chord;
  if (std::abs(phi) < 1e-4) {
    const double p2 = phi * phi;
    return c2 * phi / 6.0 * (1.0 + 2.0 * p2 / 15.0);
  }
  const double s = std::sin(phi);
  return c2 * (phi - s * std::cos(phi)) / (4.0 * s * s);
}

// d(segment_area)/d(phi) = c^2 (sin phi - phi cos phi) / (2 sin^3 phi).
inline double segment_area_derivative(double phi, double chord) {
  const double c2 = chord * chord;
  if (std::abs(phi) < 1e-4) return c2 / 6.0 * (1.0 + 2.0 * phi * phi / 5.0);
  const double s = std::sin(phi);
  return c2 * (s - phi * std::cos(phi)) / (2.0 * s * s * s);
}

// Closest |phi| may come to pi before the arc is rejected as a full circle.
inline constexpr double kMaxHalfAngleMargin = 1e-6;

// Inverts segment_area for phi in (-pi, pi). Safeguarded Newton (bisection
// fallback inside a shrinking bracket); tiny areas use the series branch.
inline double bulge_angle_from_area(double chord, double area) {
  if (!(chord > 0.0) || !std::isfinite(chord))
    throw DomainError("bulge_angle_from_area: chord length must be positive");
  if (!std::isfinite(area))
    throw DomainError("bulge_angle_from_area: area must be finite");
  if (area == 0.0) return 0.0;

  const double alpha = std::abs(area) / (chord * chord);
  const double sign = area < 0.0 ? -1.0 : 1.0;
  if (alpha < 1e-8) {
    const double phi = 6.0 * alpha;
    return sign * phi * (1.0 - 2.0 * phi * phi / 15.0);
  }
  const double phi_max = kPi - kMaxHalfAngleMargin;
  if (alpha >= segment_area(phi_max, 1.0))
    throw DomainError(
        "bulge_angle_from_area: area too large for a sub-full-circle arc");

  double guess = 0.0;
  if (alpha < kPi / 8.0)
    guess = std::min(6.0 * alpha, kPi / 2.0);
  else
    guess = std::max(kPi / 2.0, kPi - std::sqrt(kPi / (4.0 * alpha)));

  auto f = [alpha](double phi) {
    return std::make_pair(segment_area(phi, 1.0) - alpha,
                          segment_area_derivative(phi, 1.0));
  };
  std::uintmax_t iters = 200;
  const double phi = boost::math::tools::newton_raphson_iterate(
      f, guess, 0.0, phi_max, std::numeric_limits<double>::digits - 1, iters);
  return sign * phi;
}

// ---------------------------------------------------------------------------
// Oriented circles and lines

// A circle (center, radius, orientation) or a line. A line is stored by its
// unit normal pointing to the right of the direction of travel and the
// offset d with normal . x = d; the direction of travel is perp(normal).
// For both kinds the region on the left of travel is the "inside".
struct OrientedCircleLine {
  enum class Kind { circle, line };
  Kind kind = Kind::line;
  Point center{};
  double radius = 0.0;
  bool ccw = true;
  Point normal{1.0, 0.0};
  double offset = 0.0;

  static OrientedCircleLine make_circle(Point c, double r, bool counterclockwise) {
    if (!(r > 0.0)) throw DomainError("circle radius must be positive");
    OrientedCircleLine out;
    out.kind = Kind::circle;
    out.center = c;
    out.radius = r;
    out.ccw = counterclockwise;
    return out;
  }
  static OrientedCircleLine make_line(Point unit_normal, double d) {
    const double n = norm(unit_normal);
    if (std::abs(n - 1.0) > 1e-9) throw DomainError("line normal must be unit length");
    OrientedCircleLine out;
    out.kind = Kind::line;
    out.normal = unit_normal / n;
    out.offset = d;
    return out;
  }
  // Line through p travelling along `dir`.
  static OrientedCircleLine line_through(Point p, Point dir) {
    const Point n = -perp(unit(dir));
    return make_line(n, dot(n, p));
  }

  bool is_circle() const { return kind == Kind::circle; }
  Point direction() const { return perp(normal); }

  OrientedCircleLine reversed() const {
    OrientedCircleLine out = *this;
    if (is_circle()) {
      out.ccw = !ccw;
    } else {
      out.normal = -normal;
      out.offset = -offset;
    }
    return out;
  }

  // Unsigned distance from p to the carrier.
  double distance_to(Point p) const {
    if (is_circle()) return std::abs(distance(p, center) - radius);
    return std::abs(dot(normal, p) - offset);
  }

  // Unit tangent (in the direction of travel) at a point on the carrier.
  Point tangent_at(Point p) const {
    if (!is_circle()) return direction();
    const Point r = unit(p - center);
    return ccw ? perp(r) : -perp(r);
  }
};

// ---------------------------------------------------------------------------
// Arcs

struct Arc {
  Point tail;
  Point head;
  double bulge = 0.0;

  double chord_length() const { return distance(tail, head); }
  double half_angle() const { return bulge_angle_from_area(chord_length(), bulge); }
  Arc reversed() const { return {head, tail, -bulge}; }

  // Point at parameter t in [0, 1], equally spaced in turning angle.
  Point point_at(double t, double phi) const {
    const Complex chord = head.to_complex() - tail.to_complex();
    if (phi == 0.0) return Point(tail.to_complex() + chord * t);
    const Complex rot = std::polar(1.0, phi * (t - 1.0));
    const double ratio = std::sin(phi * t) / std::sin(phi);
    return Point(tail.to_complex() + chord * rot * ratio);
  }
  Point point_at(double t) const { return point_at(t, half_angle()); }

  // Unit tangent in the direction of travel at parameter t.
  Point tangent_at(double t, double phi) const {
    const Point u = unit(head - tail);
    return rotate(u, phi * (2.0 * t - 1.0));
  }
};

// Builds the arc from tail to head whose tangent at the tail is `tail_dir`.
inline Arc arc_from_tail_tangent(Point tail, Point head, Point tail_dir) {
  const double chord = distance(tail, head);
  if (!(chord > 0.0)) throw DomainError("arc endpoints coincide");
  const double phi = wrap_angle(signed_angle(tail_dir, head - tail));
  return {tail, head, segment_area(phi, chord)};
}

// Builds the arc from tail to head whose tangent at the head is `head_dir`.
inline Arc arc_from_head_tangent(Point tail, Point head, Point head_dir) {
  const double chord = distance(tail, head);
  if (!(chord > 0.0)) throw DomainError("arc endpoints coincide");
  const double phi = wrap_angle(signed_angle(head - tail, head_dir));
  return {tail, head, segment_area(phi, chord)};
}

struct ArcProperties {
  double half_angle = 0.0;
  double length = 0.0;
  double signed_curvature = 0.0;
  OrientedCircleLine carrier;
  Point tangent_at_tail;
  Point tangent_at_head;
};

inline constexpr double kStraightHalfAngle = 1e-13;

inline ArcProperties arc_properties(const Arc& arc) {
  const double c = arc.chord_length();
  if (!(c > 0.0)) throw DomainError("arc endpoints coincide");
  const double phi = bulge_angle_from_area(c, arc.bulge);
  ArcProperties out;
  out.half_angle = phi;
  const Point u = (arc.head - arc.tail) / c;
  out.tangent_at_tail = rotate(u, -phi);
  out.tangent_at_head = rotate(u, phi);
  const double s = std::sin(phi);
  // Carriers with radius beyond ~1e13 chords are treated as lines; the
  // curvature keeps its tiny value so that it stays smooth in the bulge.
  if (std::abs(phi) < kStraightHalfAngle) {
    out.length = c;
    out.signed_curvature = 2.0 * s / c;
    out.carrier = OrientedCircleLine::line_through(arc.tail, u);
    return out;
  }
  out.length = c * phi / s;
  out.signed_curvature = 2.0 * s / c;
  const Point mid = 0.5 * (arc.tail + arc.head);
  const Point center = mid + perp(u) * (0.5 * c * std::cos(phi) / s);
  out.carrier = OrientedCircleLine::make_circle(center, c / (2.0 * std::abs(s)), phi > 0.0);
  return out;
}

// Shortest distance from p to the arc.
inline double distance_to_arc(const Arc& arc, Point p) {
  const ArcProperties props = arc_properties(arc);
  const double to_ends = std::min(distance(p, arc.tail), distance(p, arc.head));
  if (!props.carrier.is_circle()) {
    const Point d = arc.head - arc.tail;
    const double t = dot(p - arc.tail, d) / dot(d, d);
    if (t <= 0.0 || t >= 1.0) return to_ends;
    return std::abs(cross(d, p - arc.tail)) / norm(d);
  }
  const Point c = props.carrier.center;
  if (distance(p, c) == 0.0) return props.carrier.radius;
  // Sweep from the tail direction to the probe direction, in the arc's sense.
  const double sweep = 2.0 * props.half_angle;
  double a = signed_angle(arc.tail - c, p - c);
  if (sweep > 0.0 && a < 0.0) a += 2.0 * kPi;
  if (sweep < 0.0 && a > 0.0) a -= 2.0 * kPi;
  if (std::abs(a) <= std::abs(sweep)) return props.carrier.distance_to(p);
  return to_ends;
}

// ---------------------------------------------------------------------------
// Moebius maps

struct MobiusMap {
  Complex a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  static MobiusMap identity() { return {}; }
  static MobiusMap translation(Complex t) { return {{1, 0}, t, {0, 0}, {1, 0}}; }
  static MobiusMap similarity(Complex scale_rot, Complex shift) {
    return {scale_rot, shift, {0, 0}, {1, 0}};
  }
  // z -> 1/z
  static MobiusMap inversion() { return {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }

  // Unique map sending z1, z2, z3 to w1, w2, w3 (all finite, distinct).
  static MobiusMap from_three_points(std::array<Complex, 3> z, std::array<Complex, 3> w) {
    // Map sending (z1, z2, z3) to (0, inf, 1): (z - z1)(z3 - z2) / ((z - z2)(z3 - z1)).
    auto to_standard = [](const std::array<Complex, 3>& p) {
      return MobiusMap{p[2] - p[1], -p[0] * (p[2] - p[1]), p[2] - p[0],
                       -p[1] * (p[2] - p[0])};
    };
    return to_standard(w).inverse().compose(to_standard(z)).normalized();
  }

  Complex determinant() const { return a * d - b * c; }

  MobiusMap normalized() const {
    if (!is_valid()) throw DomainError("degenerate Moebius map (ad - bc = 0)");
    const Complex s = std::sqrt(determinant());
    return {a / s, b / s, c / s, d / s};
  }
  bool is_valid() const {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    return scale > 0.0 && std::abs(determinant()) > 1e-12 * scale * scale;
  }

  // this after other
  MobiusMap compose(const MobiusMap& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  MobiusMap inverse() const { return {d, -b, -c, a}; }

  std::optional<Complex> pole() const {
    if (c == Complex{0.0, 0.0}) return std::nullopt;
    return -d / c;
  }

  Complex apply(Complex z) const { return (a * z + b) / (c * z + d); }

  // Derivative m'(z) = det / (cz + d)^2.
  Complex derivative(Complex z) const {
    const Complex den = c * z + d;
    return determinant() / (den * den);
  }
};

inline Point mobius_apply_point(const MobiusMap& m_raw, Point p) {
  const MobiusMap m = m_raw.normalized();
  const Complex z = p.to_complex();
  const Complex den = m.c * z + m.d;
  if (std::abs(den) <= 1e-9)
    throw DomainError("mobius_apply_point: point is at the pole of the map");
  return Point((m.a * z + m.b) / den);
}

// Image of an arc, obtained by fitting the image circle through the images of
// tail, midpoint and head (inscribed-angle formula), so circles and lines go
// through the same code path.
inline Arc mobius_apply_arc(const MobiusMap& m_raw, const Arc& arc) {
  const MobiusMap m = m_raw.normalized();
  if (auto pole = m.pole()) {
    const double gap = distance_to_arc(arc, Point(*pole));
    if (gap <= 1e-6 * arc.chord_length())
      throw DomainError("mobius_apply_arc: pole lies on the arc");
  }
  const double phi = arc.half_angle();
  const Complex t = m.apply(arc.tail.to_complex());
  const Complex h = m.apply(arc.head.to_complex());
  const Complex mid = m.apply(arc.point_at(0.5, phi).to_complex());
  const double chord = std::abs(h - t);
  if (!(chord > 0.0)) throw DomainError("mobius_apply_arc: image endpoints coincide");
  const double image_phi = std::arg((h - mid) * std::conj(mid - t));
  return {Point(t), Point(h), segment_area(image_phi, chord)};
}

// ---------------------------------------------------------------------------
// Intersections of carriers

// All finite intersection points of two carriers (0, 1 or 2 points).
inline std::vector<Point> intersect_carriers(const OrientedCircleLine& p,
                                             const OrientedCircleLine& q) {
  std::vector<Point> out;
  if (!p.is_circle() && !q.is_circle()) {
    const double det = cross(p.normal, q.normal);
    if (std::abs(det) < 1e-14) return out;
    out.push_back({(p.offset * q.normal.y - q.offset * p.normal.y) / det,
                   (p.normal.x * q.offset - q.normal.x * p.offset) / det});
    return out;
  }
  if (!p.is_circle()) return intersect_carriers(q, p);
  if (!q.is_circle()) {
    const double h = dot(q.normal, p.center) - q.offset;
    const double s2 = p.radius * p.radius - h * h;
    if (s2 < 0.0) return out;
    const Point foot = p.center - q.normal * h;
    const Point dir = q.direction();
    const double s = std::sqrt(s2);
    out.push_back(foot + dir * s);
    if (s > 0.0) out.push_back(foot - dir * s);
    return out;
  }
  const Point dc = q.center - p.center;
  const double dist = norm(dc);
  if (dist == 0.0) return out;
  const double along = (dist * dist + p.radius * p.radius - q.radius * q.radius) / (2.0 * dist);
  const double h2 = p.radius * p.radius - along * along;
  if (h2 < 0.0) return out;
  const Point e = dc / dist;
  const Point base = p.center + e * along;
  const double h = std::sqrt(h2);
  out.push_back(base + perp(e) * h);
  if (h > 0.0) out.push_back(base - perp(e) * h);
  return out;
}

// Second common point of three carriers through p: nullopt stands for the
// point at infinity (three straight lines). Inverting about p turns the three
// carriers into lines whose common point is the image of the answer.
inline std::optional<Point> second_intersection(
    const std::array<OrientedCircleLine, 3>& carriers, Point p) {
  double scale = 0.0;
  for (const auto& k : carriers)
    if (k.is_circle()) scale = std::max(scale, k.radius);
  if (scale == 0.0) scale = 1.0;
  for (const auto& k : carriers)
    if (k.distance_to(p) > 1e-9 * std::max(1.0, scale))
      throw DomainError("second_intersection: carrier does not pass through the vertex");

  // Normalized inversion w = scale / (z - p).
  auto invert = [&](Point z) { return Point(scale / (z.to_complex() - p.to_complex())); };
  std::array<Point, 3> normals;
  std::array<double, 3> offsets;
  for (int k = 0; k < 3; ++k) {
    const auto& car = carriers[k];
    Point w1, w2;
    if (car.is_circle()) {
      const Point r = p - car.center;
      w1 = invert(car.center - r);
      w2 = invert(car.center + perp(r));
    } else {
      w1 = Point(0.0, 0.0);
      w2 = invert(p + car.direction() * scale);
    }
    const Point dir = w2 - w1;
    if (norm(dir) == 0.0) throw NotConcurrent("second_intersection: degenerate carrier image");
    const Point n = -perp(unit(dir));
    normals[k] = n;
    offsets[k] = dot(n, w1);
  }
  // Least-squares common point of the three image lines.
  double m00 = 0, m01 = 0, m11 = 0, r0 = 0, r1 = 0;
  for (int k = 0; k < 3; ++k) {
    m00 += normals[k].x * normals[k].x;
    m01 += normals[k].x * normals[k].y;
    m11 += normals[k].y * normals[k].y;
    r0 += normals[k].x * offsets[k];
    r1 += normals[k].y * offsets[k];
  }
  const double det = m00 * m11 - m01 * m01;
  if (det < 1e-12) throw NotConcurrent("second_intersection: carriers are tangent at the vertex");
  const Point w{(m11 * r0 - m01 * r1) / det, (m00 * r1 - m01 * r0) / det};
  double defect = 0.0;
  for (int k = 0; k < 3; ++k) defect = std::max(defect, std::abs(dot(normals[k], w) - offsets[k]));
  if (defect > 1e-6 * std::max(1.0, norm(w)))
    throw NotConcurrent("second_intersection: carriers have no common second point");
  if (norm(w) < 1e-9) return std::nullopt;
  return Point(p.to_complex() + scale / w.to_complex());
}

}  // namespace foamlab
