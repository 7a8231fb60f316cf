#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "foamlab/constructions.hpp"
#include "foamlab/desitter.hpp"

using namespace foamlab;

namespace {

double point_gap(const DeSitterPoint& a, const DeSitterPoint& b) { return (a.vec() - b.vec()).norm(); }

bool same_carrier(const OrientedCircleLine& a, const OrientedCircleLine& b, double tol) {
  if (a.is_circle() != b.is_circle()) return false;
  if (a.is_circle())
    return distance(a.center, b.center) < tol && std::abs(a.radius - b.radius) < tol && a.ccw == b.ccw;
  return distance(a.normal, b.normal) < tol && std::abs(a.offset - b.offset) < tol;
}

Cluster jitter(const Cluster& c, double size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-size, size);
  Cluster out = c;
  for (auto& p : out.vertices) p += Point{u(rng), u(rng)};
  return out;
}

}  // namespace

TEST(CircleToPoint, UnitCircleAnchors) {
  const DeSitterPoint ccw = circle_to_point(OrientedCircleLine::make_circle({0, 0}, 1.0, true));
  EXPECT_LT(point_gap(ccw, {0, 0, 0, 1}), 1e-15);
  const DeSitterPoint cw = circle_to_point(OrientedCircleLine::make_circle({0, 0}, 1.0, false));
  EXPECT_LT(point_gap(cw, {0, 0, 0, -1}), 1e-15);
}

TEST(CircleToPoint, OffsetCircleRoundTrip) {
  const OrientedCircleLine c = OrientedCircleLine::make_circle({3, 0}, 1.0, true);
  const DeSitterPoint p = circle_to_point(c);
  EXPECT_NEAR(quadric_value(p), -1.0, 1e-12);
  EXPECT_TRUE(same_carrier(point_to_circle(p), c, 1e-12));
  const HermitianCircle h = hermitian_circle(c);
  EXPECT_NEAR(h.determinant(), -1.0, 1e-12);
  EXPECT_NEAR(-h.B.real() / h.A, 3.0, 1e-15);
}

TEST(CircleToPoint, RandomCirclesAndLinesRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0), r(0.05, 5.0), ang(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const OrientedCircleLine c = (i % 4 == 0) ? OrientedCircleLine::make_line(unit_from_angle(ang(rng)), u(rng))
                                              : OrientedCircleLine::make_circle({u(rng), u(rng)}, r(rng), i % 2);
    const DeSitterPoint p = circle_to_point(c);
    // The quadric is a difference of terms of size |p|^2, rounding scales with it.
    EXPECT_NEAR(quadric_value(p), -1.0, 1e-12 * std::max(1.0, p.vec().squaredNorm())) << i;
    EXPECT_TRUE(same_carrier(point_to_circle(p), c, 1e-10)) << i;
    // Orientation reversal is the antipodal map.
    EXPECT_LT(point_gap(circle_to_point(c.reversed()), -p), 1e-15);
  }
}

TEST(PointToCircle, RandomPointsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int done = 0;
  while (done < 200) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const double s = x * x + y * y + z * z - 1.0;
    if (s < 0.01) continue;
    const DeSitterPoint p{(done % 2 ? 1.0 : -1.0) * std::sqrt(s), x, y, z};
    EXPECT_LT(point_gap(circle_to_point(point_to_circle(p)), p), 1e-10 * std::max(1.0, p.vec().norm()));
    ++done;
  }
}

TEST(PointToCircle, ZeroFirstEntryIsALine) {
  // t + z = 0 with x^2 + y^2 = 1 (then q = -1 for any t).
  const DeSitterPoint p{0.7, 0.6, 0.8, -0.7};
  const OrientedCircleLine l = point_to_circle(p);
  EXPECT_FALSE(l.is_circle());
  EXPECT_NEAR(l.normal.x, 0.6, 1e-15);
  EXPECT_NEAR(l.normal.y, 0.8, 1e-15);
  EXPECT_NEAR(l.offset, -0.7, 1e-15);
}

TEST(PointToCircle, OffQuadricRejected) { EXPECT_THROW(point_to_circle({0, 0, 0, 2}), DomainError); }

TEST(MinkowskiForm, QuadricAndAntipode) {
  const DeSitterPoint p = circle_to_point(OrientedCircleLine::make_circle({0.3, -1.2}, 0.7, false));
  EXPECT_NEAR(minkowski_form(p, p), -1.0, 1e-12);
  EXPECT_NEAR(minkowski_form(p, -p), 1.0, 1e-12);
}

TEST(MinkowskiForm, ReferenceConstantFromConcurrentLines) {
  EXPECT_NEAR(reference_form_constant(), 0.5, 1e-15);
  // Any junction of 120-degree outgoing carriers gives the same value.
  const Cluster c = double_bubble(1.0, 0.6);
  for (const auto& jt : junction_triples(c))
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(minkowski_form(jt.points[k], jt.points[(k + 1) % 3]), reference_form_constant(), 1e-12);
}

TEST(TangentCirclePoint, MatchesCarrier) {
  const Cluster c = make_preset("four");
  for (int e = 0; e < c.edge_count(); ++e) {
    const ArcProperties p = arc_properties(c.arc(e));
    const DeSitterPoint a = tangent_circle_point(c.arc(e).tail, p.tangent_at_tail, p.signed_curvature);
    EXPECT_NEAR(quadric_value(a), -1.0, 1e-12);
    EXPECT_LT(point_gap(a, circle_to_point(p.carrier)), 1e-9) << e;
  }
}

TEST(JunctionTriples, DoubleBubbleAntipodal) {
  const auto t = junction_triples(double_bubble(1.0, 0.6));
  ASSERT_EQ(t.size(), 2u);
  for (int k = 0; k < 3; ++k) {
    double best = 1e300;
    for (int l = 0; l < 3; ++l) best = std::min(best, point_gap(t[0].points[k], -t[1].points[l]));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(JunctionTriples, TripleBubbleCounts) {
  const Cluster c = triple_bubble(1.0);
  const auto t = junction_triples(c);
  ASSERT_EQ(t.size(), 4u);
  std::vector<DeSitterPoint> pts;
  for (const auto& jt : t) pts.insert(pts.end(), jt.points.begin(), jt.points.end());
  ASSERT_EQ(pts.size(), 12u);
  int pairs = 0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) pairs += point_gap(pts[a], -pts[b]) < 1e-12;
  EXPECT_EQ(pairs, 6);
}

TEST(JunctionTriples, CounterclockwiseOrder) {
  const Cluster c = make_preset("two_lens");
  for (const auto& jt : junction_triples(c)) {
    double turn = 0.0;
    for (int k = 0; k < 3; ++k)
      turn += wrap_angle(
          signed_angle(outgoing_tangent(c, jt.half_edges[k]), outgoing_tangent(c, jt.half_edges[(k + 1) % 3])));
    EXPECT_NEAR(turn, 2.0 * kPi, 1e-9);
  }
}

TEST(JunctionTriples, RotationKeepsFormValues) {
  const Cluster c = make_preset("four");
  const auto a = junction_triples(c), b = junction_triples(rotated(translated(c, {0.4, 2.0}), 0.9));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(minkowski_form(a[i].points[k], a[i].points[(k + 1) % 3]),
                  minkowski_form(b[i].points[k], b[i].points[(k + 1) % 3]), 1e-12);
}

TEST(Verify, EquilibriumPresetsPass) {
  for (const char* name : {"double", "triple", "four", "two_lens", "necklace", "flower"}) {
    const CorrespondenceReport r = verify_correspondence(make_preset(name));
    EXPECT_TRUE(r.pass) << name;
    EXPECT_LT(r.max_collinearity, 1e-8) << name;
    EXPECT_LT(r.max_spacing, 1e-8) << name;
    EXPECT_LT(r.max_antipodality, 1e-10) << name;
  }
}

TEST(Verify, QuasiPresetsFailCollinearityOnly) {
  for (const char* name : {"quasi_two_lens", "quasi_four"}) {
    const CorrespondenceReport r = verify_correspondence(make_preset(name));
    EXPECT_FALSE(r.pass) << name;
    EXPECT_GE(r.collinearity_failures, 1) << name;
    EXPECT_EQ(r.spacing_failures, 0) << name;
  }
}

TEST(Verify, PerturbationDefectsScaleWithNoise) {
  const Cluster c = make_preset("triple");
  double prev = 0.0;
  for (double noise : {1e-5, 1e-4, 1e-3}) {
    const CorrespondenceReport r = verify_correspondence(jitter(c, noise, 12));
    const double defect = std::max(r.max_collinearity, r.max_spacing);
    EXPECT_FALSE(r.pass);
    if (prev > 0.0) EXPECT_NEAR(std::log10(defect / prev), 1.0, 0.3);
    prev = defect;
  }
  EXPECT_GT(prev, 1e-4);
  EXPECT_LT(prev, 1e-2);
}

TEST(Verify, FlowerReportsRepeatedTriples) {
  const CorrespondenceReport r = verify_correspondence(make_preset("flower"));
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.notes.empty());
}
