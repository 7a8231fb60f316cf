#pragma once

// Oriented circles and lines as points of de Sitter space, and the check that
// the junction triples of an equilibrium cluster lie evenly spaced on
// geodesics.
//
// An oriented circle is the Hermitian form A|z|^2 + B conj(z) + conj(B) z + D,
// scaled so that AD - |B|^2 = -1 and signed so that the form is negative on
// the region left of travel. Its point is M = [[A, B], [conj(B), D]] =
// [[t + z, x + iy], [x - iy, t - z]]. The center of a circle is -B / A.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "foamlab/cluster.hpp"
#include "foamlab/errors.hpp"
#include "foamlab/geometry.hpp"

namespace foamlab {

struct DeSitterPoint {
  double t = 0.0, x = 0.0, y = 0.0, z = 0.0;

  Eigen::Vector4d vec() const { return {t, x, y, z}; }
  DeSitterPoint operator-() const { return {-t, -x, -y, -z}; }
};

inline double minkowski_form(const DeSitterPoint& p, const DeSitterPoint& q) {
  return p.t * q.t - p.x * q.x - p.y * q.y - p.z * q.z;
}

inline double quadric_value(const DeSitterPoint& p) { return minkowski_form(p, p); }

struct HermitianCircle {
  double A = 0.0;
  Complex B{};
  double D = 0.0;

  double determinant() const { return A * D - std::norm(B); }
  DeSitterPoint point() const { return {0.5 * (A + D), B.real(), B.imag(), 0.5 * (A - D)}; }
  static HermitianCircle from_point(const DeSitterPoint& p) { return {p.t + p.z, {p.x, p.y}, p.t - p.z}; }
};

inline HermitianCircle hermitian_circle(const OrientedCircleLine& c) {
  if (c.is_circle()) {
    const double s = c.ccw ? 1.0 : -1.0;
    const double r = c.radius;
    // |c0|^2 - r^2 factored to limit cancellation.
    const double d = (norm(c.center) - r) * (norm(c.center) + r);
    return {s / r, -s * c.center.to_complex() / r, s * d / r};
  }
  return {0.0, c.normal.to_complex(), -2.0 * c.offset};
}

inline DeSitterPoint circle_to_point(const OrientedCircleLine& c) { return hermitian_circle(c).point(); }

// Point of the oriented circle through w with unit tangent tau and signed
// curvature kappa (positive turns left). Exact on the quadric for every
// kappa, including the line kappa = 0.
inline DeSitterPoint tangent_circle_point(Point w, Point tau, double kappa) {
  const Point pt = perp(tau);
  const Point b = -(kappa * w + pt);
  const HermitianCircle h{kappa, b.to_complex(), kappa * dot(w, w) + 2.0 * dot(w, pt)};
  return h.point();
}

inline OrientedCircleLine point_to_circle(const DeSitterPoint& p) {
  const double q = quadric_value(p);
  if (!std::isfinite(q) || std::abs(q + 1.0) > 1e-9)
    throw DomainError("point_to_circle: point is not on the de Sitter quadric (q = " + std::to_string(q) + ")");
  const HermitianCircle h = HermitianCircle::from_point(p);
  if (h.A == 0.0) {
    const double nb = std::abs(h.B);
    return OrientedCircleLine::make_line(Point{h.B.real(), h.B.imag()} / nb, -0.5 * h.D / nb);
  }
  const Complex center = -h.B / h.A;
  return OrientedCircleLine::make_circle({center.real(), center.imag()}, 1.0 / std::abs(h.A), h.A > 0.0);
}

// Form value between outward carriers of three concurrent lines at 120
// degrees. Every junction of an equilibrium cluster is a Moebius image of
// this picture, so the same value is expected at all of them.
inline double reference_form_constant() {
  std::array<DeSitterPoint, 3> p;
  for (int k = 0; k < 3; ++k)
    p[k] = circle_to_point(OrientedCircleLine::line_through({0.0, 0.0}, unit_from_angle(2.0 * kPi * k / 3.0)));
  return minkowski_form(p[0], p[1]);
}

struct JunctionTriple {
  int vertex = 0;
  // Outgoing half-edges, counterclockwise by outgoing tangent.
  std::array<HalfEdge, 3> half_edges;
  std::array<DeSitterPoint, 3> points;
};

inline std::vector<JunctionTriple> junction_triples(const Cluster& c) {
  const auto stars = vertex_stars(c);
  std::vector<JunctionTriple> out;
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (stars[v].size() != 3)
      throw StructuralError("vertex " + std::to_string(v) + " has degree " + std::to_string(stars[v].size()));
    JunctionTriple jt;
    jt.vertex = v;
    for (int k = 0; k < 3; ++k) {
      const HalfEdge h = stars[v][k];
      const Arc arc = h.forward ? c.arc(h.edge) : c.arc(h.edge).reversed();
      const ArcProperties p = arc_properties(arc);
      jt.half_edges[k] = h;
      jt.points[k] = tangent_circle_point(c.vertices[v], p.tangent_at_tail, p.signed_curvature);
    }
    out.push_back(jt);
  }
  return out;
}

struct JunctionCheck {
  int vertex = 0;
  double collinearity = 0.0;       // sigma_3 / sigma_1 of the 3x4 coordinate matrix
  std::array<double, 3> forms{};   // (0,1), (1,2), (2,0)
  double spacing = 0.0;            // largest |form - reference|
  bool pass = false;
};

struct EdgeCheck {
  int edge = 0;
  double antipodality = 0.0;  // |p_tail + p_head|
  bool pass = false;
};

struct CorrespondenceTolerance {
  double collinearity = 1e-8;
  double spacing = 1e-8;
  double antipodality = 1e-10;
};

struct CorrespondenceReport {
  double reference = 0.5;
  std::vector<JunctionCheck> junctions;
  std::vector<EdgeCheck> edges;
  double max_collinearity = 0.0, max_spacing = 0.0, max_antipodality = 0.0;
  int collinearity_failures = 0, spacing_failures = 0, antipodality_failures = 0;
  // Coincident junctions or repeated triples, reported and not resolved.
  std::vector<std::string> notes;
  bool pass = false;
};

inline double collinearity_defect(const std::array<DeSitterPoint, 3>& pts) {
  Eigen::Matrix<double, 3, 4> m;
  for (int k = 0; k < 3; ++k) m.row(k) = pts[k].vec().transpose();
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(m);
  const auto s = svd.singularValues();
  return s[0] > 0.0 ? s[2] / s[0] : 0.0;
}

inline CorrespondenceReport verify_correspondence(const Cluster& c, const CorrespondenceTolerance& tol = {}) {
  CorrespondenceReport r;
  r.reference = reference_form_constant();
  const auto triples = junction_triples(c);
  // Points indexed by half-edge for the antipodality check.
  std::vector<std::array<DeSitterPoint, 2>> by_edge(c.edges.size());
  for (const auto& jt : triples) {
    JunctionCheck jc;
    jc.vertex = jt.vertex;
    jc.collinearity = collinearity_defect(jt.points);
    for (int k = 0; k < 3; ++k) {
      jc.forms[k] = minkowski_form(jt.points[k], jt.points[(k + 1) % 3]);
      jc.spacing = std::max(jc.spacing, std::abs(jc.forms[k] - r.reference));
      by_edge[jt.half_edges[k].edge][jt.half_edges[k].forward ? 0 : 1] = jt.points[k];
    }
    const bool col_ok = jc.collinearity < tol.collinearity, sp_ok = jc.spacing < tol.spacing;
    jc.pass = col_ok && sp_ok;
    r.collinearity_failures += !col_ok;
    r.spacing_failures += !sp_ok;
    r.max_collinearity = std::max(r.max_collinearity, jc.collinearity);
    r.max_spacing = std::max(r.max_spacing, jc.spacing);
    r.junctions.push_back(jc);
  }
  for (int e = 0; e < c.edge_count(); ++e) {
    EdgeCheck ec;
    ec.edge = e;
    ec.antipodality = (by_edge[e][0].vec() + by_edge[e][1].vec()).norm();
    ec.pass = ec.antipodality < tol.antipodality;
    r.antipodality_failures += !ec.pass;
    r.max_antipodality = std::max(r.max_antipodality, ec.antipodality);
    r.edges.push_back(ec);
  }
  const double close = 1e-12 * length_scale(c);
  for (int a = 0; a < c.vertex_count(); ++a)
    for (int b = a + 1; b < c.vertex_count(); ++b)
      if (distance(c.vertices[a], c.vertices[b]) <= close)
        r.notes.push_back("junctions " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
  for (std::size_t a = 0; a < triples.size(); ++a)
    for (std::size_t b = a + 1; b < triples.size(); ++b) {
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        double best = 1e300;
        for (int l = 0; l < 3; ++l)
          best = std::min(best, (triples[a].points[k].vec() - triples[b].points[l].vec()).norm());
        worst = std::max(worst, best);
      }
      if (worst <= 1e-12)
        r.notes.push_back("junctions " + std::to_string(a) + " and " + std::to_string(b) + " give the same triple");
    }
  r.pass = r.collinearity_failures == 0 && r.spacing_failures == 0 && r.antipodality_failures == 0;
  return r;
}

}  // namespace foamlab
