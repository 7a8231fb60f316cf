#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "foamlab/constructions.hpp"
#include "foamlab/geometry.hpp"

using namespace foamlab;

namespace {

// Plain bisection on the closed-form segment area; shares nothing with the
// Newton path in the library.
double bisect_half_angle(double chord, double area) {
  double lo = 0.0, hi = kPi - 1e-9;
  const double target = std::abs(area);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double s = std::sin(mid);
    const double a = chord * chord * (mid - s * std::cos(mid)) / (4.0 * s * s);
    (a < target ? lo : hi) = mid;
  }
  return std::copysign(0.5 * (lo + hi), area);
}

struct Polyline {
  double length = 0.0;
  double segment_area = 0.0;  // area between the polyline and its chord, signed
};

Polyline polyline_oracle(const Arc& arc, int n) {
  // Sample the carrier circle directly from center and radius.
  const double c = arc.chord_length();
  const double phi = bisect_half_angle(c, arc.bulge);
  const Point u = (arc.head - arc.tail) / c;
  const double r = c / (2.0 * std::sin(std::abs(phi)));
  const Point mid = 0.5 * (arc.tail + arc.head);
  const Point center = mid + perp(u) * (0.5 * c * std::cos(phi) / std::sin(phi));
  const double a0 = std::atan2(arc.tail.y - center.y, arc.tail.x - center.x);
  Polyline out;
  Point prev = arc.tail;
  double shoelace = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double a = a0 + 2.0 * phi * i / n;
    const Point p = center + r * Point{std::cos(a), std::sin(a)};
    out.length += distance(prev, p);
    shoelace += cross(prev, p);
    prev = p;
  }
  shoelace += cross(arc.head, arc.tail);
  // A positive bulge turns counterclockwise, so arc + reversed chord is a
  // positively oriented loop.
  out.segment_area = 0.5 * shoelace;
  return out;
}

double angle_between(Point a, Point b) { return std::acos(std::clamp(dot(unit(a), unit(b)), -1.0, 1.0)); }

}  // namespace

TEST(BulgeAngle, SemicircleOfDiameterTwo) { EXPECT_NEAR(bulge_angle_from_area(2.0, kPi / 2.0), kPi / 2.0, 1e-14); }

TEST(BulgeAngle, ZeroAreaIsStraight) {
  for (double c : {1e-3, 1.0, 7.5}) EXPECT_EQ(bulge_angle_from_area(c, 0.0), 0.0);
}

TEST(BulgeAngle, MatchesBisectionOracle) {
  EXPECT_NEAR(bulge_angle_from_area(1.0, 0.1), bisect_half_angle(1.0, 0.1), 1e-13);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phi(-3.0, 3.0), chord(0.01, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double c = chord(rng);
    const double a = segment_area(phi(rng), c);
    EXPECT_NEAR(bulge_angle_from_area(c, a), bisect_half_angle(c, a), 1e-11);
  }
}

TEST(BulgeAngle, OddAndIncreasing) {
  double prev = -kPi;
  for (double a = -1.5; a <= 1.5; a += 0.01) {
    const double phi = bulge_angle_from_area(1.0, a);
    EXPECT_DOUBLE_EQ(phi, -bulge_angle_from_area(1.0, -a));
    EXPECT_GT(phi, prev);
    prev = phi;
  }
}

TEST(BulgeAngle, SeriesBranchForTinyAreas) {
  const double c = 2.0, a = 1e-10;
  EXPECT_NEAR(bulge_angle_from_area(c, a), 6.0 * a / (c * c), 1e-22);
}

TEST(BulgeAngle, RoundTripRelative) {
  for (double phi = -kPi + 1e-3; phi < kPi - 1e-3; phi += 0.0137) {
    const double a = segment_area(phi, 1.7);
    EXPECT_NEAR(segment_area(bulge_angle_from_area(1.7, a), 1.7), a, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(BulgeAngle, FullCircleRejected) {
  // Largest admissible area is about pi / (4 * margin^2) chord^2, near 7.9e11.
  EXPECT_NO_THROW(bulge_angle_from_area(1.0, 1e6));
  EXPECT_THROW(bulge_angle_from_area(1.0, 1e13), DomainError);
  EXPECT_THROW(bulge_angle_from_area(0.0, 1.0), DomainError);
}

TEST(ArcProperties, UnitSemicircle) {
  const ArcProperties p = arc_properties({{-1, 0}, {1, 0}, kPi / 2.0});
  EXPECT_NEAR(p.length, kPi, 1e-14);
  EXPECT_NEAR(std::abs(p.signed_curvature), 1.0, 1e-14);
  EXPECT_NEAR(p.carrier.radius, 1.0, 1e-14);
}

TEST(ArcProperties, StraightEdge) {
  const ArcProperties p = arc_properties({{0, 0}, {3, 0}, 0.0});
  EXPECT_DOUBLE_EQ(p.length, 3.0);
  EXPECT_DOUBLE_EQ(p.signed_curvature, 0.0);
  EXPECT_NEAR(p.tangent_at_tail.x, 1.0, 1e-15);
  EXPECT_NEAR(p.tangent_at_head.x, 1.0, 1e-15);
  EXPECT_FALSE(p.carrier.is_circle());
}

TEST(ArcProperties, PositiveBulgeTurnsCounterclockwise) {
  // Tail tangent is the chord rotated by -phi, head tangent by +phi.
  const ArcProperties p = arc_properties({{0, 0}, {1, 0}, 0.1});
  EXPECT_GT(p.signed_curvature, 0.0);
  EXPECT_LT(p.tangent_at_tail.y, 0.0);
  EXPECT_GT(p.tangent_at_head.y, 0.0);
  EXPECT_TRUE(p.carrier.ccw);
}

TEST(ArcProperties, PolylineOracle) {
  for (const Arc arc : {Arc{{0, 0}, {1, 0}, 0.1}, Arc{{0.3, -1}, {2, 0.5}, -0.8}, Arc{{0, 0}, {0, 1}, 1.2}}) {
    const ArcProperties p = arc_properties(arc);
    const Polyline poly = polyline_oracle(arc, 10000);
    EXPECT_NEAR(p.length / poly.length, 1.0, 1e-6);
    EXPECT_NEAR(arc.bulge / poly.segment_area, 1.0, 1e-6);
    const double r = p.length / (2.0 * std::abs(p.half_angle));
    EXPECT_NEAR(std::abs(p.signed_curvature) * r, 1.0, 1e-12);
  }
}

TEST(ArcProperties, ReversalFlipsSignedQuantities) {
  const Arc a{{0.2, 0.1}, {1.3, -0.4}, 0.37};
  const ArcProperties p = arc_properties(a), q = arc_properties(a.reversed());
  EXPECT_DOUBLE_EQ(p.length, q.length);
  EXPECT_DOUBLE_EQ(p.signed_curvature, -q.signed_curvature);
}

TEST(Mobius, IdentityFixesPoints) {
  const Point p{0.3, -2.0};
  const Point q = mobius_apply_point(MobiusMap::identity(), p);
  EXPECT_DOUBLE_EQ(q.x, p.x);
  EXPECT_DOUBLE_EQ(q.y, p.y);
}

TEST(Mobius, InversionKeepsUnitCircle) {
  for (int k = 0; k < 12; ++k) {
    const Point q = mobius_apply_point(MobiusMap::inversion(), unit_from_angle(0.5 * k + 0.1));
    EXPECT_NEAR(norm(q), 1.0, 1e-14);
  }
}

TEST(Mobius, InversionOfOffsetCircle) {
  // Images of |z - 3| = 1 under 1/z lie on the circle with center 3/8 and
  // radius 1/8.
  for (int k = 0; k < 3; ++k) {
    const Point q = mobius_apply_point(MobiusMap::inversion(), Point{3, 0} + unit_from_angle(2.0 * k + 0.3));
    EXPECT_NEAR(distance(q, {0.375, 0.0}), 0.125, 1e-14);
  }
}

TEST(Mobius, PoleRejected) {
  EXPECT_THROW(mobius_apply_point(MobiusMap::inversion(), {0, 0}), DomainError);
}

TEST(Mobius, ArcIdentityAndRotation) {
  const Arc a{{0, 0}, {1, 0.5}, 0.2};
  const Arc b = mobius_apply_arc(MobiusMap::identity(), a);
  EXPECT_NEAR(b.bulge, a.bulge, 1e-14);
  const MobiusMap rot = MobiusMap::similarity(std::polar(1.0, 0.7), {0.0, 0.0});
  const Arc r = mobius_apply_arc(rot, a);
  EXPECT_NEAR(r.bulge, a.bulge, 1e-14);
  EXPECT_NEAR(distance(r.head, rotate(a.head, 0.7)), 0.0, 1e-14);
}

TEST(Mobius, PoleOnArcRejected) {
  const Arc a{{-1, 0}, {1, 0}, kPi / 2.0};  // lower unit semicircle through (0, -1)
  EXPECT_THROW(mobius_apply_arc(MobiusMap{{1, 0}, {0, 0}, {1, 0}, {0, 1}}, a), DomainError);
}

TEST(Mobius, PreservesAnglesBetweenArcs) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  const Point v{0.1, 0.2};
  const Arc a = arc_from_tail_tangent(v, v + Point{1.0, 0.1}, unit_from_angle(0.0));
  const Arc b = arc_from_tail_tangent(v, v + Point{-0.4, 0.9}, unit_from_angle(2.0 * kPi / 3.0));
  for (int i = 0; i < 25; ++i) {
    MobiusMap m{{g(rng), g(rng)}, {g(rng), g(rng)}, {0.3 * g(rng), 0.3 * g(rng)}, {g(rng), g(rng)}};
    if (auto pole = m.pole(); pole && std::abs(*pole - v.to_complex()) < 3.0) {
      m.c *= 0.01;
    }
    const Arc ma = mobius_apply_arc(m, a), mb = mobius_apply_arc(m, b);
    const double angle = angle_between(arc_properties(ma).tangent_at_tail, arc_properties(mb).tangent_at_tail);
    EXPECT_NEAR(angle, 2.0 * kPi / 3.0, 1e-9);
  }
}

TEST(Mobius, CompositionMatches) {
  const Arc a{{0, 0}, {1, 0}, 0.3};
  const MobiusMap m1{{1, 0.2}, {0.1, 0}, {0.05, 0.1}, {1, 0}};
  const MobiusMap m2{{0.5, 0}, {0, 1}, {0.1, 0}, {1, -0.2}};
  const Arc twice = mobius_apply_arc(m2, mobius_apply_arc(m1, a));
  const Arc once = mobius_apply_arc(m2.compose(m1), a);
  EXPECT_NEAR(distance(twice.tail, once.tail), 0.0, 1e-12);
  EXPECT_NEAR(distance(twice.head, once.head), 0.0, 1e-12);
  EXPECT_NEAR(twice.bulge, once.bulge, 1e-9);
}

TEST(SecondIntersection, ThreeLinesMeetAtInfinity) {
  std::array<OrientedCircleLine, 3> lines;
  for (int k = 0; k < 3; ++k) lines[k] = OrientedCircleLine::line_through({0, 0}, unit_from_angle(2.0 * kPi * k / 3.0));
  EXPECT_FALSE(second_intersection(lines, {0, 0}).has_value());
}

TEST(SecondIntersection, DoubleBubbleVertexFindsTheOther) {
  const Cluster c = double_bubble(1.0, 0.6);
  const auto q = second_intersection(outgoing_carriers(c, 0), c.vertices[0]);
  ASSERT_TRUE(q.has_value());
  EXPECT_NEAR(distance(*q, c.vertices[1]), 0.0, 1e-9);
}

TEST(SecondIntersection, PairwiseIntersectionOracle) {
  // Lines through 0 at 120 degrees pushed through z -> z / (z / 2 + 1):
  // three circles through 0 and the image of infinity, 2.
  const MobiusMap m{{1, 0}, {0, 0}, {0.5, 0}, {1, 0}};
  std::array<OrientedCircleLine, 3> carriers;
  for (int k = 0; k < 3; ++k) {
    const Point dir = unit_from_angle(0.4 + 2.0 * kPi * k / 3.0);
    carriers[k] = arc_properties(mobius_apply_arc(m, Arc{{0, 0}, 0.5 * dir, 0.0})).carrier;
  }
  const auto q = second_intersection(carriers, {0, 0});
  ASSERT_TRUE(q.has_value());
  for (int a = 0; a < 3; ++a) {
    const auto pts = intersect_carriers(carriers[a], carriers[(a + 1) % 3]);
    double best = 1e300;
    for (const Point& p : pts) best = std::min(best, distance(p, *q));
    EXPECT_LT(best, 1e-9);
  }
  EXPECT_NEAR(distance(*q, {2, 0}), 0.0, 1e-9);
}

TEST(SecondIntersection, QuasiVertexIsNotConcurrent) {
  const Cluster c = make_preset("quasi_two_lens");
  int failures = 0;
  for (int v = 0; v < c.vertex_count(); ++v) {
    try {
      (void)second_intersection(outgoing_carriers(c, v), c.vertices[v]);
    } catch (const NotConcurrent&) {
      ++failures;
    }
  }
  EXPECT_GT(failures, 0);
}
