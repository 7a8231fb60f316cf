#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "foamlab/constructions.hpp"
#include "foamlab/variation.hpp"

using namespace foamlab;

namespace {

// Distance between the carrier centers of the two outer arcs.
double measured_center_distance(double r1, double r2) {
  const Cluster c = double_bubble(r1, r2);
  return distance(arc_properties(c.arc(0)).carrier.center, arc_properties(c.arc(1)).carrier.center);
}

double max_residual(const Cluster& c) {
  const ResidualReport r = residuals(c);
  return std::max(r.angle_sup, r.cocycle_sup);
}

// Vertices of `after` that also exist in `before` and are not listed in
// `skip`, compared one to one.
double untouched_drift(const Cluster& before, const Cluster& after, std::initializer_list<int> skip) {
  double worst = 0.0;
  for (int v = 0; v < before.vertex_count() && v < after.vertex_count(); ++v) {
    if (std::find(skip.begin(), skip.end(), v) != skip.end()) continue;
    worst = std::max(worst, distance(before.vertices[v], after.vertices[v]));
  }
  return worst;
}

}  // namespace

TEST(DoubleBubble, EqualRadii) {
  const Cluster c = double_bubble(1.0, 1.0);
  EXPECT_NEAR(measured_center_distance(1.0, 1.0), 1.0, 1e-15);
  EXPECT_EQ(c.edges[2].bulge, 0.0);
  EXPECT_EQ(classify(c).verdict, Verdict::Equilibrium);
}

TEST(DoubleBubble, HalfRadius) {
  const double d = measured_center_distance(1.0, 0.5);
  EXPECT_NEAR(d * d, 0.75, 1e-14);
  const Cluster c = double_bubble(1.0, 0.5);
  EXPECT_NEAR(std::abs(arc_properties(c.arc(2)).signed_curvature), 1.0, 1e-12);
}

TEST(DoubleBubble, CenterDistanceStationaryAtHalfRadius) {
  const double h = 1e-5;
  auto slope = [&](double r2) {
    return (measured_center_distance(1.0, r2 + h) - measured_center_distance(1.0, r2 - h)) / (2.0 * h);
  };
  EXPECT_NEAR(slope(0.5), 0.0, 1e-6);
  EXPECT_LT(slope(0.45), 0.0);
  EXPECT_GT(slope(0.55), 0.0);
}

TEST(DoubleBubble, LawOfCosines) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double r1 = u(rng), r2 = u(rng);
    const double d = measured_center_distance(r1, r2);
    EXPECT_NEAR(d * d, r1 * r1 + r2 * r2 - r1 * r2, 1e-9);
  }
}

TEST(DoubleBubble, RejectsNonPositiveRadius) { EXPECT_THROW(double_bubble(0.0, 1.0), DomainError); }

TEST(TripleBubble, SymmetricResiduals) {
  const Cluster c = triple_bubble(2.0);
  EXPECT_LT(max_residual(c), 1e-10);
  const AreaVector a = region_areas(c);
  EXPECT_NEAR(a[0], 2.0, 1e-12);
  EXPECT_NEAR(a[1], 2.0, 1e-12);
  EXPECT_NEAR(a[2], 2.0, 1e-12);
}

TEST(TripleBubble, MobiusImageStaysEquilibrium) {
  std::mt19937_64 rng(9);
  const Cluster c = triple_bubble(1.0);
  for (int i = 0; i < 5; ++i)
    EXPECT_EQ(classify(mobius_apply_cluster(random_mobius(c, rng), c)).verdict, Verdict::Equilibrium);
}

TEST(TripleBubble, PrescribedAreas) {
  const AreaVector target = Eigen::Vector3d(1.0, 1.2, 0.9);
  const Cluster c = triple_bubble(target);
  EXPECT_LT((region_areas(c) - target).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TripleBubble, ThreeParameters) { EXPECT_EQ(tangent_dimension(triple_bubble(1.0), false).nullity, 3); }

TEST(FourBubble, EquilibriumWithFourParameters) {
  const Cluster c = four_bubble();
  EXPECT_EQ(c.region_count, 4);
  EXPECT_EQ(classify(c).verdict, Verdict::Equilibrium);
  EXPECT_EQ(tangent_dimension(c, false).nullity, 4);
}

TEST(FourBubble, ShrinkRecoversTriple) {
  const Cluster back = scale_three_sided(four_bubble(), 4, 0.0);
  const Cluster triple = triple_bubble(1.0);
  ASSERT_EQ(back.vertex_count(), triple.vertex_count());
  ASSERT_EQ(back.edge_count(), triple.edge_count());
  EXPECT_LT(max_vertex_displacement(back, triple), 1e-7);
  EXPECT_LT(max_bulge_difference(back, triple), 1e-7);
}

TEST(Decorate, DoubleBubbleGainsThreeSidedRegion) {
  const Cluster c = double_bubble(1.0, 0.7);
  const Cluster d = decorate(c, 0, 0.2);
  EXPECT_EQ(d.region_count, 3);
  EXPECT_TRUE(validate(d).ok);
  EXPECT_EQ(classify(d).verdict, Verdict::Equilibrium);
  EXPECT_LT(untouched_drift(c, d, {0}), 1e-9);
}

TEST(Decorate, NewAreaShrinksToZero) {
  const Cluster c = triple_bubble(1.0);
  double prev = 1e300;
  for (double t : {0.3, 0.1, 0.03, 0.01, 0.003}) {
    const double a = region_areas(decorate(c, 0, t))[3];
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, prev);
    prev = a;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(Decorate, ShrinkUndoesDecoration) {
  const Cluster c = double_bubble(1.0, 0.7);
  for (int v : {0, 1}) {
    const Cluster back = scale_three_sided(decorate(c, v, 0.15), 3, 0.0);
    EXPECT_LT(max_vertex_displacement(back, c), 1e-7) << v;
    EXPECT_LT(max_bulge_difference(back, c), 1e-7) << v;
  }
}

TEST(Decorate, OversizedInsertionBreaksDown) {
  EXPECT_THROW(decorate(double_bubble(), 0, 50.0), TopologyBreakdown);
}

TEST(ScaleThreeSided, FactorOneIsIdentity) {
  const Cluster c = four_bubble();
  const Cluster s = scale_three_sided(c, 4, 1.0);
  EXPECT_LT(max_vertex_displacement(c, s), 1e-10);
  EXPECT_LT(max_bulge_difference(c, s), 1e-10);
}

TEST(ScaleThreeSided, GrowingLeavesTheRestAlone) {
  const Cluster c = four_bubble(0.2);
  const Cluster s = scale_three_sided(c, 4, 2.0);
  EXPECT_EQ(classify(s).verdict, Verdict::Equilibrium);
  // Bubble corners are vertex 0 and the appended 4 and 5.
  EXPECT_LT(untouched_drift(c, s, {0, 4, 5}), 1e-9);
  EXPECT_GT(region_areas(s)[3], region_areas(c)[3]);
}

TEST(ScaleThreeSided, RejectsOtherRegions) {
  EXPECT_THROW(scale_three_sided(double_bubble(), 1, 0.5), DomainError);
  EXPECT_THROW(scale_three_sided(four_bubble(), 0, 0.5), DomainError);
  EXPECT_THROW(scale_three_sided(four_bubble(), 4, -1.0), DomainError);
}

TEST(TwoLens, SymmetricEquilibrium) {
  const Cluster c = two_lens();
  EXPECT_EQ(c.region_count, 3);
  EXPECT_EQ(classify(c).verdict, Verdict::Equilibrium);
  EXPECT_EQ(tangent_dimension(c, false).nullity, 4);
  EXPECT_EQ(tangent_dimension(c, true).nullity, 1);
}

TEST(TwoLens, SlidingKeepsEquilibrium) {
  TwoLensParams p;
  p.alpha2 = 2.2;
  EXPECT_EQ(classify(two_lens(p)).verdict, Verdict::Equilibrium);
}

TEST(QuasiVariants, UnrecurvedIsTwoLens) {
  const Cluster a = two_lens_recurved(0.0), b = two_lens();
  EXPECT_EQ(max_vertex_displacement(a, b), 0.0);
  EXPECT_LT(max_bulge_difference(a, b), 1e-14);
  EXPECT_EQ(classify(a).verdict, Verdict::Equilibrium);
}

TEST(QuasiVariants, RecurvedAndStretched) {
  for (const Cluster& c : {two_lens_recurved(0.1), four_stretched(0.2)}) {
    EXPECT_TRUE(validate(c).ok);
    EXPECT_EQ(classify(c).verdict, Verdict::QuasiEquilibrium);
    EXPECT_THROW(pressures(c), PathInconsistent);
  }
}

TEST(Necklace, SevenBubbles) {
  const Cluster c = necklace(7);
  EXPECT_EQ(c.region_count, 8);
  EXPECT_EQ(classify(c).verdict, Verdict::Equilibrium);
  const PressureVector p = pressures(c);
  for (int r = 1; r <= 7; ++r) EXPECT_NEAR(p.values[r], 1.0, 1e-12);
  EXPECT_NEAR(p.values[8], 0.0, 1e-12);
  EXPECT_EQ(tangent_dimension(c, true).nullity, 3);
}

TEST(Necklace, RegularIsSymmetric) {
  const Cluster c = necklace(7, 0.0);
  const AreaVector a = region_areas(c);
  for (int r = 1; r < 7; ++r) EXPECT_NEAR(a[r], a[0], 1e-12);
}

TEST(Necklace, TooFewBubblesHaveNoChamber) {
  // Unit-curvature bubbles with straight walls put adjacent disk centers at
  // distance 1; a zero-pressure chamber needs a point farther than 1 from
  // every center, so the center polygon needs more than 6 sides.
  EXPECT_THROW(necklace(6), DomainError);
  EXPECT_THROW(necklace(4), DomainError);
}

TEST(Flower, EquilibriumWithFiveParameters) {
  const FlowerConstruction f = flower_construction();
  const Cluster& c = f.cluster;
  EXPECT_EQ(c.region_count, 5);
  EXPECT_EQ(classify(c).verdict, Verdict::Equilibrium);
  EXPECT_EQ(tangent_dimension(c, false).nullity, 5);
  EXPECT_GT(f.slide, 0.0);
  EXPECT_LT(f.slide, 1.0);
}

TEST(Flower, EqualPetalsAreFourFoldSymmetric) {
  const FlowerConstruction f = flower_construction();
  const Cluster& c = f.cluster;
  const AreaVector a = region_areas(c);
  for (int r = 2; r <= 4; ++r) EXPECT_NEAR(a[r], a[1], 1e-9);
  // Rotating by 90 degrees about the symmetry center maps the vertex set
  // onto itself.
  for (const Point& p : c.vertices) {
    const Point q = f.center + rotate(p - f.center, kPi / 2.0);
    double best = 1e300;
    for (const Point& s : c.vertices) best = std::min(best, distance(q, s));
    EXPECT_LT(best, 1e-8);
  }
}

TEST(Flower, UnequalPetals) {
  FlowerParams fp;
  fp.r_up = 1.0;
  fp.r_down = 0.8;
  fp.center_pressure = 2.5;
  EXPECT_EQ(classify(flower(fp)).verdict, Verdict::Equilibrium);
  fp.center_pressure = 1.0;
  EXPECT_THROW(flower(fp), DomainError);
}

TEST(ArcTriangle, EquilateralAngles) {
  const ArcTriangle t = arc_triangle(1.0);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(t.interior_angle(k), 2.0 * kPi / 3.0, 1e-10);
    EXPECT_NEAR(t.arcs[k].half_angle(), kPi / 6.0, 1e-13);
    EXPECT_NEAR(norm(t.vertices[k]), 1.0, 1e-15);
  }
}

TEST(ArcTriangle, MobiusImageKeepsAngles) {
  const ArcTriangle t = arc_triangle({Point{0, 0}, Point{2, 0.3}, Point{0.4, 1.5}});
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(t.interior_angle(k), 2.0 * kPi / 3.0, 1e-10);
}

TEST(ArcTriangle, ThreeDimensionalFamily) {
  // Chart: three vertices and three bulges. Constraints: three interior
  // angles at 120 degrees and the three rigid motions.
  const ArcTriangle base = arc_triangle(1.0, {0.2, -0.1}, 0.3);
  Eigen::VectorXd x(9);
  for (int k = 0; k < 3; ++k) {
    x[2 * k] = base.vertices[k].x;
    x[2 * k + 1] = base.vertices[k].y;
    x[6 + k] = base.arcs[k].bulge;
  }
  auto angles = [](const Eigen::VectorXd& y) {
    ArcTriangle t;
    for (int k = 0; k < 3; ++k) t.vertices[k] = {y[2 * k], y[2 * k + 1]};
    for (int k = 0; k < 3; ++k) t.arcs[k] = {t.vertices[k], t.vertices[(k + 1) % 3], y[6 + k]};
    return Eigen::Vector3d(t.interior_angle(0), t.interior_angle(1), t.interior_angle(2));
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 9);
  const double h = 1e-6;
  for (int j = 0; j < 9; ++j) {
    Eigen::VectorXd up = x, down = x;
    up[j] += h;
    down[j] -= h;
    m.block(0, j, 3, 1) = (angles(up) - angles(down)) / (2.0 * h);
  }
  for (int k = 0; k < 3; ++k) {
    m(3, 2 * k) = 1.0;
    m(4, 2 * k + 1) = 1.0;
    m(5, 2 * k) = -x[2 * k + 1];
    m(5, 2 * k + 1) = x[2 * k];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s[rank] > 1e-6 * s[0]) ++rank;
  EXPECT_EQ(9 - rank, 3);
}

TEST(Presets, RegistryRejectsUnknowns) {
  EXPECT_THROW(make_preset("pentagon"), DomainError);
  EXPECT_THROW(make_preset("double", {{"k", 3.0}}), DomainError);
  EXPECT_THROW(make_preset("necklace", {{"k", 7.5}}), DomainError);
  EXPECT_EQ(make_preset("necklace", {{"k", 8.0}}).region_count, 9);
}

TEST(Presets, NonQuasiAreEquilibria) {
  for (const auto& name : preset_names()) {
    const Cluster c = make_preset(name);
    const Verdict expected = name.rfind("quasi_", 0) == 0 ? Verdict::QuasiEquilibrium : Verdict::Equilibrium;
    EXPECT_EQ(classify(c).verdict, expected) << name;
  }
}
