#pragma once

// Preset clusters and decoration surgery.
//
// Closed forms: double bubble, symmetric triple, necklace, two lenses, arc
// triangle. Procedural: four bubble (decorated triple), flower (lens slid on
// a double bubble interface, then reflected), quasi-equilibrium variants.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "foamlab/cluster.hpp"
#include "foamlab/equilibrium.hpp"
#include "foamlab/errors.hpp"
#include "foamlab/geometry.hpp"

namespace foamlab {

// Arc from tail to head along the circle about `center`, turning
// counterclockwise when `ccw` is set.
inline Arc arc_around(Point center, Point tail, Point head, bool ccw) {
  double sweep = signed_angle(tail - center, head - center);
  if (ccw && sweep <= 0.0) sweep += 2.0 * kPi;
  if (!ccw && sweep >= 0.0) sweep -= 2.0 * kPi;
  return {tail, head, segment_area(0.5 * sweep, distance(tail, head))};
}

namespace detail {

inline void add_edge(Cluster& c, const Arc& arc, int tail, int head, int left, int right) {
  c.edges.push_back({tail, head, arc.bulge, left, right});
}

inline Point reflect_across(Point p, Point a, Point b) {
  const Point u = unit(b - a);
  const Point d = p - a;
  return a + 2.0 * dot(d, u) * u - d;
}

inline void append_region_label(Cluster& c) {
  if (!c.region_labels.empty()) c.region_labels.push_back("R" + std::to_string(c.region_count));
}

// Rebuilds edge e after one endpoint moved along its carrier, keeping the
// tangent at the other endpoint. `old` describes the edge before the move.
inline void refit_from_old(Cluster& c, int e, const ArcProperties& old, bool tail_moved) {
  EdgeRecord& ed = c.edges[e];
  const Point tail = c.vertices[ed.tail], head = c.vertices[ed.head];
  if (!(distance(tail, head) > 0.0)) throw TopologyBreakdown("edge " + std::to_string(e) + " collapsed");
  const Arc fitted = tail_moved ? arc_from_head_tangent(tail, head, old.tangent_at_head)
                                : arc_from_tail_tangent(tail, head, old.tangent_at_tail);
  ed.bulge = fitted.bulge;
}

inline void require_embedded(const Cluster& c, const std::string& what) {
  ValidateOptions opts;
  opts.check_disjoint = true;
  const ValidationReport r = validate(c, opts);
  if (!r.ok) throw TopologyBreakdown(what + ": " + (r.failures.empty() ? "invalid" : r.failures.front()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Double bubble

// Distance between the outer circle centers, d^2 = r1^2 + r2^2 - r1 r2.
inline double double_bubble_center_distance(double r1, double r2) {
  return std::sqrt(r1 * r1 + r2 * r2 - r1 * r2);
}

// Bubble 1 (radius r1) centered at the origin, bubble 2 at (d, 0). Vertex 0
// is the upper junction. Edges: outer arc of 1, outer arc of 2, interface
// (from the lower to the upper junction, bubble 1 on its left).
inline Cluster double_bubble(double r1 = 1.0, double r2 = 1.0) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("double_bubble: radii must be positive");
  const double d = double_bubble_center_distance(r1, r2);
  const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
  const Point c1{0.0, 0.0}, c2{d, 0.0};
  const Point up{a, h}, down{a, -h};
  Cluster c;
  c.vertices = {up, down};
  c.region_count = 2;
  detail::add_edge(c, arc_around(c1, up, down, true), 0, 1, 1, 0);
  detail::add_edge(c, arc_around(c2, down, up, true), 1, 0, 2, 0);
  const double kappa = 1.0 / r1 - 1.0 / r2;
  const double chord = 2.0 * h;
  const double phi = std::asin(std::clamp(0.5 * kappa * chord, -1.0, 1.0));
  detail::add_edge(c, Arc{down, up, segment_area(phi, chord)}, 1, 0, 1, 2);
  return c;
}

// ---------------------------------------------------------------------------
// Triple bubble

// Symmetric triple bubble with three equal areas. Vertex 0 is the center,
// straight walls run to vertices 1..3, outer arcs are semicircles.
inline Cluster triple_bubble(double area = 1.0) {
  if (!(area > 0.0)) throw DomainError("triple_bubble: area must be positive");
  // Each region: triangle rho^2 sqrt(3)/4 plus a semicircle on chord rho sqrt(3).
  const double unit_area = std::sqrt(3.0) / 4.0 + 3.0 * kPi / 8.0;
  const double rho = std::sqrt(area / unit_area);
  Cluster c;
  c.region_count = 3;
  c.vertices.push_back({0.0, 0.0});
  for (int k = 0; k < 3; ++k) c.vertices.push_back(rho * unit_from_angle(kPi / 2.0 + 2.0 * kPi * k / 3.0));
  for (int k = 0; k < 3; ++k) {
    const int left = k + 1, right = (k + 2) % 3 + 1;
    detail::add_edge(c, Arc{c.vertices[0], c.vertices[k + 1], 0.0}, 0, k + 1, left, right);
  }
  for (int k = 0; k < 3; ++k) {
    const int a = k + 1, b = (k + 1) % 3 + 1;
    const double chord = distance(c.vertices[a], c.vertices[b]);
    detail::add_edge(c, Arc{c.vertices[a], c.vertices[b], segment_area(kPi / 2.0, chord)}, a, b, k + 1, 0);
  }
  return c;
}

// Triple bubble with prescribed areas, solved from the symmetric cluster of
// the same mean area.
inline Cluster triple_bubble(const AreaVector& areas, const SolveOptions& opts = {}) {
  if (areas.size() != 3) throw DomainError("triple_bubble: three areas required");
  const Cluster start = triple_bubble(areas.mean());
  return solve(start, areas, opts);
}

// ---------------------------------------------------------------------------
// Arc triangles

struct ArcTriangle {
  std::array<Point, 3> vertices;
  // arcs[k] runs from vertices[k] to vertices[(k + 1) % 3].
  std::array<Arc, 3> arcs;

  // Interior angle at vertex k (between the two arcs meeting there).
  double interior_angle(int k) const {
    const Arc& out = arcs[k];
    const Arc& in = arcs[(k + 2) % 3];
    const Point t_out = arc_properties(out).tangent_at_tail;
    const Point t_in = -arc_properties(in).tangent_at_head;
    return std::abs(signed_angle(t_out, t_in));
  }
};

// Equilateral arc triangle centered at `center`, circumradius `scale`,
// vertices at angles offset + 2 pi k / 3, each arc bulging outward with
// half-angle pi/6 so that all interior angles are 120 degrees.
inline ArcTriangle arc_triangle(double scale = 1.0, Point center = {}, double offset = kPi / 2.0) {
  if (!(scale > 0.0)) throw DomainError("arc_triangle: scale must be positive");
  ArcTriangle tri;
  for (int k = 0; k < 3; ++k) tri.vertices[k] = center + scale * unit_from_angle(offset + 2.0 * kPi * k / 3.0);
  for (int k = 0; k < 3; ++k) {
    const Point a = tri.vertices[k], b = tri.vertices[(k + 1) % 3];
    tri.arcs[k] = {a, b, segment_area(kPi / 6.0, distance(a, b))};
  }
  return tri;
}

// 120-degree arc triangle with prescribed (counterclockwise) vertices, as the
// Moebius image of the equilateral one.
inline ArcTriangle arc_triangle(const std::array<Point, 3>& pts) {
  if (cross(pts[1] - pts[0], pts[2] - pts[0]) <= 0.0)
    throw DomainError("arc_triangle: vertices must be distinct and counterclockwise");
  const ArcTriangle base = arc_triangle();
  const MobiusMap m = MobiusMap::from_three_points(
      {base.vertices[0].to_complex(), base.vertices[1].to_complex(), base.vertices[2].to_complex()},
      {pts[0].to_complex(), pts[1].to_complex(), pts[2].to_complex()});
  ArcTriangle tri;
  tri.vertices = pts;
  for (int k = 0; k < 3; ++k) {
    Arc a = mobius_apply_arc(m, base.arcs[k]);
    a.tail = pts[k];
    a.head = pts[(k + 1) % 3];
    tri.arcs[k] = a;
  }
  return tri;
}

// ---------------------------------------------------------------------------
// Decoration surgery

namespace detail {

// Moebius map sending p to 0 and q to infinity (or a translation when q is
// the point at infinity), with unit derivative modulus at p.
inline MobiusMap normalizing_map(Point p, std::optional<Point> q) {
  if (!q) return MobiusMap::translation(-p.to_complex());
  const double s = distance(p, *q);
  if (!(s > 0.0)) throw DomainError("normalizing_map: points coincide");
  return MobiusMap{Complex(s, 0.0), -p.to_complex() * s, Complex(1.0, 0.0), -q->to_complex()};
}

}  // namespace detail

// Inserts a three-sided bubble at vertex v. The second common point q of the
// carriers at v is sent to infinity, the three carriers become straight lines
// at 120 degrees, and the equilateral arc triangle with vertices at distance t
// from the junction is inserted there before mapping back. Vertex v is
// replaced by one triangle corner, two corners and three edges are appended
// and the new region gets id n + 1.
inline Cluster decorate(const Cluster& c, int v, double t) {
  if (v < 0 || v >= c.vertex_count()) throw DomainError("decorate: no vertex " + std::to_string(v));
  if (!(t > 0.0)) throw DomainError("decorate: size must be positive");
  const auto stars = vertex_stars(c);
  const auto& star = stars[v];
  if (star.size() != 3) throw StructuralError("decorate: vertex must have degree 3");

  std::array<OrientedCircleLine, 3> carriers;
  for (int k = 0; k < 3; ++k) carriers[k] = arc_properties(half_arc(c, star[k])).carrier;
  const std::optional<Point> q = second_intersection(carriers, c.vertices[v]);
  const MobiusMap m = detail::normalizing_map(c.vertices[v], q);
  const MobiusMap back = m.inverse();

  // Directions of the three straight images at 0 come from the conformal
  // derivative, which also works when an edge ends at the second point.
  const Complex rot = m.derivative(c.vertices[v].to_complex());
  std::array<Point, 3> corners;
  for (int k = 0; k < 3; ++k) {
    const Point dir = unit(Point(rot * outgoing_tangent(c, star[k]).to_complex()));
    const Point far = c.vertices[target(c, star[k])];
    const bool far_at_infinity = q && distance(far, *q) < 1e-9 * length_scale(c);
    if (!far_at_infinity && !(t < 0.5 * norm(mobius_apply_point(m, far))))
      throw TopologyBreakdown("decorate: size too large for the incident edges");
    corners[k] = t * dir;
  }

  Cluster out = c;
  const int n_new = c.region_count + 1;
  std::array<int, 3> ids{v, c.vertex_count(), c.vertex_count() + 1};
  std::array<Point, 3> mapped;
  try {
    for (int k = 0; k < 3; ++k) mapped[k] = mobius_apply_point(back, corners[k]);
  } catch (const DomainError&) {
    throw TopologyBreakdown("decorate: inserted bubble reaches the point at infinity");
  }
  out.vertices[v] = mapped[0];
  out.vertices.push_back(mapped[1]);
  out.vertices.push_back(mapped[2]);

  for (int k = 0; k < 3; ++k) {
    const HalfEdge h = star[k];
    const ArcProperties old = arc_properties(c.arc(h.edge));
    EdgeRecord& ed = out.edges[h.edge];
    if (h.forward) ed.tail = ids[k];
    else ed.head = ids[k];
    detail::refit_from_old(out, h.edge, old, h.forward);
  }
  for (int k = 0; k < 3; ++k) {
    const int k1 = (k + 1) % 3;
    const Arc local{corners[k], corners[k1], segment_area(kPi / 6.0, distance(corners[k], corners[k1]))};
    Arc arc;
    try {
      arc = mobius_apply_arc(back, local);
    } catch (const DomainError&) {
      throw TopologyBreakdown("decorate: inserted bubble reaches the point at infinity");
    }
    out.edges.push_back({ids[k], ids[k1], arc.bulge, n_new, left_region(c, star[k])});
  }
  out.region_count = n_new;
  detail::append_region_label(out);
  detail::require_embedded(out, "decorate");
  return out;
}

// Boundary walk of a three-sided region and the external half-edge leaving
// each of its corners.
struct ThreeSidedBubble {
  std::array<HalfEdge, 3> walk;
  std::array<int, 3> corners;
  std::array<HalfEdge, 3> external;
};

inline ThreeSidedBubble three_sided_bubble(const Cluster& c, int region) {
  if (region <= 0 || region > c.region_count)
    throw DomainError("region " + std::to_string(region) + " is not an interior region");
  const WalkAnalysis walks = boundary_walks(c);
  if (!walks.ok) throw StructuralError(walks.problems.front());
  const auto& w = walks.walks[region];
  if (w.size() != 1 || w[0].size() != 3)
    throw DomainError("region " + std::to_string(region) + " is not three-sided");
  ThreeSidedBubble b;
  std::set<int> own;
  for (int j = 0; j < 3; ++j) {
    b.walk[j] = w[0][j];
    b.corners[j] = origin(c, w[0][j]);
    own.insert(w[0][j].edge);
  }
  for (int j = 0; j < 3; ++j) {
    int found = 0;
    for (int e = 0; e < c.edge_count(); ++e) {
      if (own.count(e)) continue;
      if (c.edges[e].tail == b.corners[j]) b.external[j] = {e, true}, ++found;
      else if (c.edges[e].head == b.corners[j]) b.external[j] = {e, false}, ++found;
    }
    if (found != 1) throw StructuralError("three-sided region corner without a single external edge");
  }
  return b;
}

namespace detail {

inline double winding_about(const Cluster& c, const std::array<HalfEdge, 3>& walk, Point p) {
  double turn = 0.0;
  for (const HalfEdge& h : walk) {
    const auto pts = sample_arc(half_arc(c, h), 256);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) turn += signed_angle(pts[i] - p, pts[i + 1] - p);
  }
  return turn / (2.0 * kPi);
}

}  // namespace detail

// Expands or shrinks a three-sided bubble. The two common points of the
// external carriers are sent to 0 (the one inside the bubble) and infinity,
// where the bubble is an equilateral arc triangle about 0; the picture is
// scaled by `factor` and mapped back. factor = 0 removes the bubble and
// merges its corners into the lowest-numbered one.
inline Cluster scale_three_sided(const Cluster& c, int region, double factor) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) throw DomainError("scale_three_sided: factor must be >= 0");
  const ThreeSidedBubble b = three_sided_bubble(c, region);
  const double scale = length_scale(c);

  std::array<OrientedCircleLine, 3> carriers;
  for (int j = 0; j < 3; ++j) carriers[j] = arc_properties(half_arc(c, b.external[j])).carrier;
  std::vector<std::optional<Point>> candidates;
  for (const Point& p : intersect_carriers(carriers[0], carriers[1]))
    if (carriers[2].distance_to(p) < 1e-6 * scale) candidates.push_back(p);
  if (!carriers[0].is_circle() && !carriers[1].is_circle() && !carriers[2].is_circle())
    candidates.push_back(std::nullopt);
  if (candidates.size() != 2)
    throw NotConcurrent("scale_three_sided: external carriers do not share two points");

  int inside = -1;
  for (int i = 0; i < 2; ++i)
    if (candidates[i] && std::abs(detail::winding_about(c, b.walk, *candidates[i]) - 1.0) < 0.25) inside = i;
  if (inside < 0) throw NotConcurrent("scale_three_sided: no common carrier point inside the bubble");
  const Point p_in = *candidates[inside];
  const MobiusMap m = detail::normalizing_map(p_in, candidates[1 - inside]);

  Cluster out = c;
  std::array<ArcProperties, 3> ext_old;
  for (int j = 0; j < 3; ++j) ext_old[j] = arc_properties(c.arc(b.external[j].edge));

  if (factor > 0.0) {
    const MobiusMap s{Complex(factor, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)};
    const MobiusMap full = m.inverse().compose(s).compose(m);
    try {
      for (int j = 0; j < 3; ++j) out.vertices[b.corners[j]] = mobius_apply_point(full, c.vertices[b.corners[j]]);
      for (const HalfEdge& h : b.walk) out.edges[h.edge].bulge = mobius_apply_arc(full, c.arc(h.edge)).bulge;
    } catch (const DomainError&) {
      throw TopologyBreakdown("scale_three_sided: scaled bubble reaches the point at infinity");
    }
    for (int j = 0; j < 3; ++j) detail::refit_from_old(out, b.external[j].edge, ext_old[j], b.external[j].forward);
    detail::require_embedded(out, "scale_three_sided");
    return out;
  }

  // Collapse: corners merge at p_in.
  const int keep = *std::min_element(b.corners.begin(), b.corners.end());
  std::vector<int> vmap(c.vertex_count());
  std::set<int> removed;
  for (int j = 0; j < 3; ++j)
    if (b.corners[j] != keep) removed.insert(b.corners[j]);
  int next_id = 0;
  for (int v = 0; v < c.vertex_count(); ++v) vmap[v] = removed.count(v) ? -1 : next_id++;
  for (int v : removed) vmap[v] = vmap[keep];
  std::set<int> dropped_edges;
  for (const HalfEdge& h : b.walk) dropped_edges.insert(h.edge);

  Cluster merged;
  merged.region_count = c.region_count - 1;
  for (int v = 0; v < c.vertex_count(); ++v)
    if (!removed.count(v)) merged.vertices.push_back(v == keep ? p_in : c.vertices[v]);
  auto rmap = [region](int r) { return r > region ? r - 1 : r; };
  std::vector<int> emap(c.edge_count(), -1);
  for (int e = 0; e < c.edge_count(); ++e) {
    if (dropped_edges.count(e)) continue;
    EdgeRecord ed = c.edges[e];
    ed.tail = vmap[ed.tail];
    ed.head = vmap[ed.head];
    ed.left = rmap(ed.left);
    ed.right = rmap(ed.right);
    emap[e] = static_cast<int>(merged.edges.size());
    merged.edges.push_back(ed);
  }
  if (!c.region_labels.empty()) {
    merged.region_labels = c.region_labels;
    merged.region_labels.erase(merged.region_labels.begin() + region);
  }
  for (int j = 0; j < 3; ++j)
    detail::refit_from_old(merged, emap[b.external[j].edge], ext_old[j], b.external[j].forward);
  return merged;
}

// ---------------------------------------------------------------------------
// Four bubble

// Standard 4-bubble: the symmetric triple bubble (unit area regions) with a
// three-sided bubble of size t inserted at its central junction.
inline Cluster four_bubble(double t = 0.35, double area = 1.0) {
  return decorate(triple_bubble(area), 0, t * std::sqrt(area));
}

// ---------------------------------------------------------------------------
// Two lenses on a circle

struct TwoLensParams {
  double big_radius = 1.0;
  double r1 = 0.35;
  double r2 = 0.35;
  double alpha1 = 0.0;
  double alpha2 = kPi;
};

// Circle of radius R about the origin (region 1) carrying two lens bubbles
// (regions 2 and 3) centered at angles alpha1 < alpha2 on its boundary.
// Vertices 2k and 2k + 1 are the clockwise and counterclockwise corners of
// lens k. Edges: two big arcs, then outer and inner arc of each lens.
inline Cluster two_lens(const TwoLensParams& p = {}) {
  const double big = p.big_radius;
  if (!(big > 0.0) || !(p.r1 > 0.0) || !(p.r2 > 0.0)) throw DomainError("two_lens: radii must be positive");
  if (!(p.r1 < big) || !(p.r2 < big)) throw DomainError("two_lens: lenses must be smaller than the bubble");
  Cluster c;
  c.region_count = 3;
  const std::array<double, 2> radii{p.r1, p.r2};
  const std::array<double, 2> angles{p.alpha1, p.alpha2};
  std::array<double, 2> half_width{};
  std::array<Point, 2> centers{};
  for (int k = 0; k < 2; ++k) {
    const double r = radii[k];
    const double d = double_bubble_center_distance(big, r);
    const double a = (d * d + big * big - r * r) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, big * big - a * a));
    half_width[k] = std::atan2(h, a);
    centers[k] = d * unit_from_angle(angles[k]);
    const Complex dir = std::polar(1.0, angles[k]);
    c.vertices.push_back(Point(dir * Complex(a, -h)));
    c.vertices.push_back(Point(dir * Complex(a, h)));
  }
  const double gap1 = p.alpha2 - p.alpha1;
  const double gap2 = 2.0 * kPi - gap1;
  if (!(gap1 > half_width[0] + half_width[1]) || !(gap2 > half_width[0] + half_width[1]))
    throw TopologyBreakdown("two_lens: lenses overlap");

  const Point origin{};
  detail::add_edge(c, arc_around(origin, c.vertices[1], c.vertices[2], true), 1, 2, 1, 0);
  detail::add_edge(c, arc_around(origin, c.vertices[3], c.vertices[0], true), 3, 0, 1, 0);
  for (int k = 0; k < 2; ++k) {
    const int lo = 2 * k, hi = 2 * k + 1, lens = k + 2;
    detail::add_edge(c, arc_around(centers[k], c.vertices[lo], c.vertices[hi], true), lo, hi, lens, 0);
    const double kappa = 1.0 / big - 1.0 / radii[k];
    const double chord = distance(c.vertices[lo], c.vertices[hi]);
    const double phi = std::asin(std::clamp(0.5 * kappa * chord, -1.0, 1.0));
    detail::add_edge(c, Arc{c.vertices[lo], c.vertices[hi], segment_area(phi, chord)}, lo, hi, 1, lens);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Quasi-equilibrium variants

// Two-lens cluster with the two big arcs recurved by delta (in half-angle)
// and both arcs of each lens recurved by -delta. Every tangent at every
// junction turns by the same angle, so the 120-degree angles survive while
// the curvature sums at the junctions no longer vanish. delta = 0 gives
// two_lens itself.
inline Cluster two_lens_recurved(double delta = 0.1, const TwoLensParams& p = {}) {
  Cluster c = two_lens(p);
  for (int e = 0; e < c.edge_count(); ++e) {
    const Arc a = c.arc(e);
    const double shift = e < 2 ? delta : -delta;
    const double phi = a.half_angle() + shift;
    if (!(std::abs(phi) < kPi - 1e-3)) throw DomainError("two_lens_recurved: delta too large");
    c.edges[e].bulge = segment_area(phi, a.chord_length());
  }
  return c;
}

// Equal double bubble with one bubble above the other, both junctions
// decorated, then the two decorations pulled apart horizontally by `stretch`
// each. The middle line lengthens and the top and bottom arcs keep their
// turning, so their curvature drops while all angles stay at 120 degrees.
inline Cluster four_stretched(double stretch = 0.2, double t = 0.25) {
  Cluster c = rotated(double_bubble(1.0, 1.0), kPi / 2.0);
  c = decorate(c, 0, t);
  c = decorate(c, 1, t);
  // Left cluster corner group: vertex 0 and its two appended corners (2, 3);
  // right group: vertex 1 and corners 4, 5.
  const std::array<int, 3> left{0, 2, 3}, right{1, 4, 5};
  const bool swap_sides = c.vertices[0].x > c.vertices[1].x;
  std::vector<double> phis(c.edges.size());
  for (int e = 0; e < c.edge_count(); ++e) phis[e] = c.arc(e).half_angle();
  for (int v : left) c.vertices[v].x += swap_sides ? stretch : -stretch;
  for (int v : right) c.vertices[v].x += swap_sides ? -stretch : stretch;
  for (int e = 0; e < c.edge_count(); ++e) c.edges[e].bulge = segment_area(phis[e], c.arc(e).chord_length());
  return c;
}

// ---------------------------------------------------------------------------
// Necklace

// k bubbles of unit curvature around a chamber of pressure 0. Each bubble is
// the part of a unit disk between two straight walls, and adjacent disk
// centers are at distance 1, so the centers form an equilateral polygon with
// unit sides. A chamber (a point farther than 1 from every center) exists
// only for k >= 7. `skew` deforms the regular polygon while keeping it
// mirror symmetric; skew = 0 gives the regular (dihedral) necklace.
// Regions: 0 exterior, 1..k bubbles, k + 1 chamber. Vertices 2i and 2i + 1
// are the outer and inner ends of wall i (between bubbles i + 1 and i + 2).
inline Cluster necklace(int k, double skew = 0.03) {
  if (k < 5) throw DomainError("necklace: at least 5 bubbles required");
  if (k < 7)
    throw DomainError("necklace: unit-curvature bubbles around a zero-pressure chamber need k >= 7 (k = " +
                            std::to_string(k) + " leaves no room for the chamber)");
  const bool odd = (k % 2) == 1;
  const int half = odd ? (k - 1) / 2 : k / 2;
  // Directions of the polygon edges in the upper half; the lower half mirrors
  // them (direction pi - alpha), which closes the x component identically.
  std::vector<double> upper(half);
  for (int j = 0; j < half; ++j)
    upper[j] = odd ? kPi / 2.0 + 2.0 * kPi * (j + 1) / k : kPi / 2.0 + kPi / k + 2.0 * kPi * j / k;
  upper[0] += skew;
  if (!odd) upper[1] -= 0.5 * skew;
  // Close the y component by adjusting the last upper edge.
  double rest = odd ? 0.5 : 0.0;
  for (int j = 0; j + 1 < half; ++j) rest += std::sin(upper[j]);
  if (std::abs(rest) > 1.0) throw DomainError("necklace: skew too large");
  upper[half - 1] = kPi - std::asin(-rest);

  std::vector<double> dirs;
  if (odd) dirs.push_back(kPi / 2.0);
  for (double a : upper) dirs.push_back(a);
  for (int j = half - 1; j >= 0; --j) dirs.push_back(kPi - upper[j]);

  std::vector<Point> centers(k);
  Point cursor{};
  for (int j = 0; j < k; ++j) {
    centers[j] = cursor;
    cursor += unit_from_angle(dirs[j]);
  }
  Point mean{};
  for (const Point& p : centers) mean += p;
  mean = mean / static_cast<double>(k);
  for (Point& p : centers) p -= mean;

  Cluster c;
  c.region_count = k + 1;
  const int chamber = k + 1;
  const double s3 = std::sqrt(3.0) / 2.0;
  for (int i = 0; i < k; ++i) {
    const Point a = centers[i], b = centers[(i + 1) % k];
    const Point mid = 0.5 * (a + b);
    const Point out = -perp(unit(b - a));
    c.vertices.push_back(mid + s3 * out);
    c.vertices.push_back(mid - s3 * out);
  }
  for (int i = 0; i < k; ++i) {
    const int bubble = i + 1, next = (i + 1) % k + 1;
    detail::add_edge(c, Arc{c.vertices[2 * i], c.vertices[2 * i + 1], 0.0}, 2 * i, 2 * i + 1, bubble, next);
  }
  for (int i = 0; i < k; ++i) {
    const int prev = (i + k - 1) % k;
    const int u_prev = 2 * prev, u_this = 2 * i;
    detail::add_edge(c, arc_around(centers[i], c.vertices[u_prev], c.vertices[u_this], true), u_prev, u_this,
                     i + 1, 0);
  }
  for (int i = 0; i < k; ++i) {
    const int prev = (i + k - 1) % k;
    const int in_this = 2 * i + 1, in_prev = 2 * prev + 1;
    detail::add_edge(c, arc_around(centers[i], c.vertices[in_this], c.vertices[in_prev], true), in_this, in_prev,
                     i + 1, chamber);
  }
  detail::require_embedded(c, "necklace");
  return c;
}

// ---------------------------------------------------------------------------
// Flower

struct FlowerParams {
  double r_up = 1.0;
  double r_down = 1.0;
  // Pressure of the central region; must exceed both petal pressures.
  double center_pressure = 2.0;
};

struct FlowerConstruction {
  Cluster cluster;
  // Position of the lens corner along the interface (arc parameter in [0, 1]).
  double slide = 0.0;
  Point center;  // intersection of the two symmetry lines
};

// Four petals around a four-sided center. A lens is placed on the interface
// of a double bubble (one bubble above the other) and slid until the line
// through the centers of the two upper arcs is perpendicular to the line
// through the centers of the two lower arcs; reflecting the quarter around
// the right-hand junction across both lines assembles the cluster.
// Regions: 0 exterior, 1 center, 2 upper petal, 3 lower petal, 4 and 5
// their images under the point reflection.
inline FlowerConstruction flower_construction(const FlowerParams& fp = {}) {
  const double p_up = 1.0 / fp.r_up, p_down = 1.0 / fp.r_down;
  if (!(fp.center_pressure > std::max(p_up, p_down)))
    throw DomainError("flower: center pressure must exceed both petal pressures");
  const Cluster db = rotated(double_bubble(fp.r_up, fp.r_down), -kPi / 2.0);
  // After rotation: bubble 1 (up) is centered at the origin, bubble 2 below.
  const Point c_up{0.0, 0.0};
  const Point c_down = rotate(Point{double_bubble_center_distance(fp.r_up, fp.r_down), 0.0}, -kPi / 2.0);
  const Point w0 = db.vertices[0];
  const Arc iface = db.arc(2);  // from the left junction to w0, upper bubble on its left
  const double iface_phi = iface.half_angle();

  const double k_up = fp.center_pressure - p_up;
  const double k_down = p_down - fp.center_pressure;
  struct Lens {
    Point corner, t_up, t_down, c_lens_up, c_lens_down;
  };
  auto lens_at = [&](double s) {
    Lens l;
    l.corner = iface.point_at(s, iface_phi);
    const Point tau = iface.tangent_at(s, iface_phi);
    l.t_up = rotate(tau, 2.0 * kPi / 3.0);
    l.t_down = rotate(tau, -2.0 * kPi / 3.0);
    l.c_lens_up = l.corner + perp(l.t_up) / k_up;
    l.c_lens_down = l.corner + perp(l.t_down) / k_down;
    return l;
  };
  auto defect = [&](double s) {
    const Lens l = lens_at(s);
    return dot(unit(l.c_lens_up - c_up), unit(l.c_lens_down - c_down));
  };

  // Scan from the right-hand junction leftward for the first sign change.
  const int samples = 400;
  double lo = -1.0, hi = -1.0;
  double prev = defect(1.0 - 1e-6);
  for (int i = 1; i <= samples; ++i) {
    const double s = 1.0 - static_cast<double>(i) / samples;
    const double cur = defect(std::max(s, 1e-6));
    if ((cur > 0.0) != (prev > 0.0)) {
      lo = std::max(s, 1e-6);
      hi = 1.0 - static_cast<double>(i - 1) / samples;
      break;
    }
    prev = cur;
  }
  if (lo < 0.0) throw NonConvergence("flower: no slide position makes the symmetry lines perpendicular");
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      defect, lo, hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), iters);
  const double s = 0.5 * (bracket.first + bracket.second);
  const Lens lens = lens_at(s);

  auto r_up = [&](Point p) { return detail::reflect_across(p, c_up, lens.c_lens_up); };
  auto r_down = [&](Point p) { return detail::reflect_across(p, c_down, lens.c_lens_down); };

  Cluster c;
  c.region_count = 5;
  c.region_labels = {"exterior", "center", "upper", "lower", "upper'", "lower'"};
  const Point p2 = lens.corner;
  c.vertices = {w0, r_up(w0), r_down(w0), r_up(r_down(w0)), p2, r_up(p2), r_down(p2), r_up(r_down(p2))};

  const std::array<int, 8> vm_up{1, 0, 3, 2, 5, 4, 7, 6};
  const std::array<int, 8> vm_down{2, 3, 0, 1, 6, 7, 4, 5};
  const std::array<int, 6> rm_up{0, 1, 2, 5, 4, 3};
  const std::array<int, 6> rm_down{0, 1, 4, 3, 2, 5};
  auto reflect_edge = [](const EdgeRecord& e, const std::array<int, 8>& vm, const std::array<int, 6>& rm) {
    return EdgeRecord{vm[e.tail], vm[e.head], -e.bulge, rm[e.right], rm[e.left]};
  };
  auto point_reflect_edge = [&](const EdgeRecord& e) {
    return EdgeRecord{vm_up[vm_down[e.tail]], vm_up[vm_down[e.head]], e.bulge, rm_up[rm_down[e.left]],
                      rm_up[rm_down[e.right]]};
  };

  const ArcProperties outer_up = arc_properties(db.arc(0));
  const ArcProperties outer_down = arc_properties(db.arc(1));
  const Point to_corner = -iface.tangent_at(1.0, iface_phi);
  const EdgeRecord wall{0, 4, arc_from_tail_tangent(w0, p2, to_corner).bulge, 3, 2};
  const EdgeRecord arc_up{0, 1, arc_from_tail_tangent(w0, c.vertices[1], outer_up.tangent_at_tail).bulge, 2, 0};
  const EdgeRecord arc_down{0, 2, arc_from_tail_tangent(w0, c.vertices[2], -outer_down.tangent_at_head).bulge, 0, 3};
  const EdgeRecord lens_up{4, 5, arc_from_tail_tangent(p2, c.vertices[5], lens.t_up).bulge, 1, 2};
  const EdgeRecord lens_down{4, 6, arc_from_tail_tangent(p2, c.vertices[6], lens.t_down).bulge, 3, 1};

  c.edges = {wall,
             reflect_edge(wall, vm_up, rm_up),
             reflect_edge(wall, vm_down, rm_down),
             point_reflect_edge(wall),
             arc_up,
             reflect_edge(arc_up, vm_down, rm_down),
             arc_down,
             reflect_edge(arc_down, vm_up, rm_up),
             lens_up,
             reflect_edge(lens_up, vm_down, rm_down),
             lens_down,
             reflect_edge(lens_down, vm_up, rm_up)};

  // Symmetry-line intersection.
  const auto lines = intersect_carriers(OrientedCircleLine::line_through(c_up, lens.c_lens_up - c_up),
                                        OrientedCircleLine::line_through(c_down, lens.c_lens_down - c_down));
  FlowerConstruction out;
  out.center = lines.empty() ? Point{} : lines.front();
  out.slide = s;
  detail::require_embedded(c, "flower");
  // Polish away the root-finding residue; areas are kept.
  out.cluster = solve(c, region_areas(c));
  return out;
}

inline Cluster flower(const FlowerParams& fp = {}) { return flower_construction(fp).cluster; }

// ---------------------------------------------------------------------------
// Preset registry

inline double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"double", "triple",    "four",           "two_lens",  "necklace",
                                              "flower", "quasi_two_lens", "quasi_four"};
  return names;
}

// Builds a preset by name. Unknown parameter keys are rejected.
inline Cluster make_preset(const std::string& kind, const std::map<std::string, double>& p = {}) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : p) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw DomainError("preset '" + kind + "' has no parameter '" + k + "'");
    }
  };
  auto lens_params = [&]() {
    TwoLensParams lp;
    lp.big_radius = param(p, "R", lp.big_radius);
    lp.r1 = param(p, "r1", lp.r1);
    lp.r2 = param(p, "r2", lp.r2);
    lp.alpha1 = param(p, "alpha1", lp.alpha1);
    lp.alpha2 = param(p, "alpha2", lp.alpha2);
    return lp;
  };
  if (kind == "double") {
    allow({"r1", "r2"});
    return double_bubble(param(p, "r1", 1.0), param(p, "r2", 1.0));
  }
  if (kind == "triple") {
    allow({"area"});
    return triple_bubble(param(p, "area", 1.0));
  }
  if (kind == "four") {
    allow({"t", "area"});
    return four_bubble(param(p, "t", 0.35), param(p, "area", 1.0));
  }
  if (kind == "two_lens") {
    allow({"R", "r1", "r2", "alpha1", "alpha2"});
    return two_lens(lens_params());
  }
  if (kind == "necklace") {
    allow({"k", "skew"});
    const double k = param(p, "k", 7.0);
    if (k != std::floor(k)) throw DomainError("necklace: k must be an integer");
    return necklace(static_cast<int>(k), param(p, "skew", 0.03));
  }
  if (kind == "flower") {
    allow({"r_up", "r_down", "center_pressure"});
    FlowerParams fp;
    fp.r_up = param(p, "r_up", fp.r_up);
    fp.r_down = param(p, "r_down", fp.r_down);
    fp.center_pressure = param(p, "center_pressure", fp.center_pressure);
    return flower(fp);
  }
  if (kind == "quasi_two_lens") {
    allow({"delta", "R", "r1", "r2", "alpha1", "alpha2"});
    return two_lens_recurved(param(p, "delta", 0.1), lens_params());
  }
  if (kind == "quasi_four") {
    allow({"stretch", "t"});
    return four_stretched(param(p, "stretch", 0.2), param(p, "t", 0.25));
  }
  throw DomainError("unknown preset '" + kind + "'");
}

}  // namespace foamlab
