#pragma once

// The cluster chart: vertices, edges carrying signed bulge areas, and region
// incidences. Region 0 is the exterior; interior regions are 1..n.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "foamlab/errors.hpp"
#include "foamlab/geometry.hpp"
#include "foamlab/tolerance.hpp"

namespace foamlab {

inline constexpr int kExterior = 0;

struct EdgeRecord {
  int tail = 0;
  int head = 0;
  // Signed segment area; positive adds area to the left region.
  double bulge = 0.0;
  int left = 0;
  int right = 0;
};

struct Cluster {
  std::vector<Point> vertices;
  std::vector<EdgeRecord> edges;
  // Number of interior regions n; region ids run 0..n.
  int region_count = 0;
  // Optional labels, one per region id (size n + 1) or empty.
  std::vector<std::string> region_labels;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  // Dimension of the chart (x_1, y_1, ..., x_v, y_v, b_1, ..., b_e).
  int chart_dimension() const { return 2 * vertex_count() + edge_count(); }

  Arc arc(int e) const {
    const EdgeRecord& r = edges[e];
    return {vertices[r.tail], vertices[r.head], r.bulge};
  }
  std::string label(int region) const {
    if (region >= 0 && region < static_cast<int>(region_labels.size()))
      return region_labels[region];
    return region == kExterior ? "exterior" : "R" + std::to_string(region);
  }
};

// Area of each interior region; entry i belongs to region i + 1.
using AreaVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Half-edges

struct HalfEdge {
  int edge = 0;
  bool forward = true;
  friend bool operator==(HalfEdge, HalfEdge) = default;
};

inline HalfEdge twin(HalfEdge h) { return {h.edge, !h.forward}; }
inline int origin(const Cluster& c, HalfEdge h) {
  return h.forward ? c.edges[h.edge].tail : c.edges[h.edge].head;
}
inline int target(const Cluster& c, HalfEdge h) {
  return h.forward ? c.edges[h.edge].head : c.edges[h.edge].tail;
}
inline int left_region(const Cluster& c, HalfEdge h) {
  return h.forward ? c.edges[h.edge].left : c.edges[h.edge].right;
}
inline int right_region(const Cluster& c, HalfEdge h) {
  return h.forward ? c.edges[h.edge].right : c.edges[h.edge].left;
}
inline Arc half_arc(const Cluster& c, HalfEdge h) {
  const Arc a = c.arc(h.edge);
  return h.forward ? a : a.reversed();
}

// Outgoing half-edges of every vertex, sorted counterclockwise by tangent.
inline std::vector<std::vector<HalfEdge>> vertex_stars(const Cluster& c) {
  std::vector<std::vector<std::pair<double, HalfEdge>>> tmp(c.vertices.size());
  for (int e = 0; e < c.edge_count(); ++e) {
    const ArcProperties p = arc_properties(c.arc(e));
    tmp[c.edges[e].tail].push_back({angle_of(p.tangent_at_tail), {e, true}});
    tmp[c.edges[e].head].push_back({angle_of(-p.tangent_at_head), {e, false}});
  }
  std::vector<std::vector<HalfEdge>> stars(c.vertices.size());
  for (std::size_t v = 0; v < tmp.size(); ++v) {
    std::stable_sort(tmp[v].begin(), tmp[v].end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& item : tmp[v]) stars[v].push_back(item.second);
  }
  return stars;
}

// Outgoing unit tangent and signed curvature of a half-edge.
inline Point outgoing_tangent(const Cluster& c, HalfEdge h) {
  const ArcProperties p = arc_properties(c.arc(h.edge));
  return h.forward ? p.tangent_at_tail : -p.tangent_at_head;
}

// ---------------------------------------------------------------------------
// Boundary walks and validation

struct WalkAnalysis {
  bool ok = true;
  std::vector<std::string> problems;
  // walks[r] holds every closed walk with region r on its left.
  std::vector<std::vector<std::vector<HalfEdge>>> walks;
};

inline WalkAnalysis boundary_walks(const Cluster& c) {
  WalkAnalysis out;
  out.walks.resize(c.region_count + 1);
  const auto stars = vertex_stars(c);
  auto next = [&](HalfEdge h) -> std::optional<HalfEdge> {
    const auto& star = stars[target(c, h)];
    const auto it = std::find(star.begin(), star.end(), twin(h));
    if (it == star.end()) return std::nullopt;
    const auto idx = static_cast<std::size_t>(it - star.begin());
    return star[(idx + star.size() - 1) % star.size()];
  };
  std::vector<char> seen(2 * c.edges.size(), 0);
  auto slot = [](HalfEdge h) { return 2 * h.edge + (h.forward ? 0 : 1); };
  for (int e = 0; e < c.edge_count(); ++e) {
    for (bool fwd : {true, false}) {
      HalfEdge start{e, fwd};
      if (seen[slot(start)]) continue;
      const int region = left_region(c, start);
      std::vector<HalfEdge> walk;
      HalfEdge h = start;
      bool closed = false;
      while (!seen[slot(h)]) {
        seen[slot(h)] = 1;
        walk.push_back(h);
        const auto n = next(h);
        if (!n) break;
        if (left_region(c, *n) != region) {
          out.ok = false;
          out.problems.push_back("edge " + std::to_string(n->edge) +
                                 " breaks the boundary walk of region " +
                                 std::to_string(region));
        }
        h = *n;
        if (h == start) {
          closed = true;
          break;
        }
      }
      if (!closed) {
        out.ok = false;
        out.problems.push_back("open boundary walk in region " + std::to_string(region));
      }
      if (region >= 0 && region <= c.region_count) out.walks[region].push_back(std::move(walk));
    }
  }
  for (int r = 1; r <= c.region_count; ++r) {
    if (out.walks[r].size() != 1) {
      out.ok = false;
      out.problems.push_back("region " + std::to_string(r) + " has " +
                             std::to_string(out.walks[r].size()) +
                             " boundary walks (expected 1)");
    }
  }
  return out;
}

struct ValidationReport {
  bool ok = true;
  bool ids_ok = true;
  bool degree_ok = true;
  bool euler_ok = true;
  bool chords_ok = true;
  bool walks_ok = true;
  bool connected_ok = true;
  bool areas_positive = true;
  std::optional<bool> disjoint_ok;
  int v = 0, e = 0, n = 0;
  std::vector<std::string> failures;
};

struct ValidateOptions {
  bool check_disjoint = false;
  int disjoint_samples = 32;
};

AreaVector region_areas_unchecked(const Cluster& c);

namespace detail {

inline bool segments_cross(Point a, Point b, Point p, Point q) {
  const double d1 = cross(b - a, p - a), d2 = cross(b - a, q - a);
  const double d3 = cross(q - p, a - p), d4 = cross(q - p, b - p);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

inline std::vector<Point> sample_arc(const Arc& arc, int m) {
  const double phi = arc.half_angle();
  std::vector<Point> pts(m + 1);
  for (int i = 0; i <= m; ++i) pts[i] = arc.point_at(static_cast<double>(i) / m, phi);
  pts.front() = arc.tail;
  pts.back() = arc.head;
  return pts;
}

}  // namespace detail

inline ValidationReport validate(const Cluster& c, const ValidateOptions& opts = {}) {
  ValidationReport r;
  r.v = c.vertex_count();
  r.e = c.edge_count();
  r.n = c.region_count;
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    r.ok = false;
    r.failures.push_back(msg);
  };

  if (c.region_count < 2) fail(r.ids_ok, "at least two interior regions are required");
  for (int e = 0; e < r.e; ++e) {
    const auto& ed = c.edges[e];
    const std::string tag = "edge " + std::to_string(e) + ": ";
    if (ed.tail < 0 || ed.tail >= r.v || ed.head < 0 || ed.head >= r.v)
      fail(r.ids_ok, tag + "vertex id out of range");
    if (ed.left < 0 || ed.left > r.n || ed.right < 0 || ed.right > r.n)
      fail(r.ids_ok, tag + "region id out of range");
    if (ed.left == ed.right) fail(r.ids_ok, tag + "left and right regions coincide");
  }
  if (!r.ids_ok) return r;

  std::vector<int> degree(r.v, 0);
  for (const auto& ed : c.edges) {
    ++degree[ed.tail];
    ++degree[ed.head];
  }
  for (int v = 0; v < r.v; ++v)
    if (degree[v] != 3)
      fail(r.degree_ok, "vertex " + std::to_string(v) + " has degree " + std::to_string(degree[v]));

  if (r.v != 2 * (r.n - 1) || r.e != 3 * (r.n - 1))
    fail(r.euler_ok, "Euler counts violated: v=" + std::to_string(r.v) +
                         " e=" + std::to_string(r.e) + " n=" + std::to_string(r.n));

  for (int e = 0; e < r.e; ++e) {
    const Arc a = c.arc(e);
    if (!(a.chord_length() > 1e-9)) {
      fail(r.chords_ok, "edge " + std::to_string(e) + ": endpoints coincide");
      continue;
    }
    try {
      (void)a.half_angle();
    } catch (const DomainError&) {
      fail(r.chords_ok, "edge " + std::to_string(e) + ": bulge too large");
    }
  }
  if (!r.chords_ok) return r;

  const WalkAnalysis walks = boundary_walks(c);
  if (!walks.ok) {
    r.walks_ok = false;
    r.ok = false;
    for (const auto& p : walks.problems) r.failures.push_back(p);
  }

  // Union-find over vertices joined by edges.
  std::vector<int> parent(r.v);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& ed : c.edges) parent[find(ed.tail)] = find(ed.head);
  for (int v = 1; v < r.v; ++v)
    if (find(v) != find(0)) {
      fail(r.connected_ok, "cluster is not connected");
      break;
    }

  if (r.walks_ok) {
    const AreaVector areas = region_areas_unchecked(c);
    for (int i = 0; i < r.n; ++i)
      if (!(areas[i] > 0.0))
        fail(r.areas_positive, "region " + std::to_string(i + 1) + " has non-positive area");
  }

  if (opts.check_disjoint) {
    bool disjoint = true;
    std::vector<std::vector<Point>> samples;
    for (int e = 0; e < r.e; ++e) samples.push_back(detail::sample_arc(c.arc(e), opts.disjoint_samples));
    for (int e = 0; e < r.e && disjoint; ++e)
      for (int f = e + 1; f < r.e && disjoint; ++f)
        for (std::size_t i = 0; i + 1 < samples[e].size() && disjoint; ++i)
          for (std::size_t j = 0; j + 1 < samples[f].size(); ++j)
            if (detail::segments_cross(samples[e][i], samples[e][i + 1], samples[f][j],
                                       samples[f][j + 1])) {
              disjoint = false;
              r.failures.push_back("edges " + std::to_string(e) + " and " +
                                   std::to_string(f) + " intersect");
              break;
            }
    r.disjoint_ok = disjoint;
    if (!disjoint) r.ok = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Areas, perimeter, scale

// Shoelace area of each region's chord polygon plus the signed bulges of its
// edges, with the sign flipped where the walk runs against an edge.
inline AreaVector region_areas_unchecked(const Cluster& c) {
  AreaVector areas = AreaVector::Zero(c.region_count);
  for (const auto& ed : c.edges) {
    const Point a = c.vertices[ed.tail], b = c.vertices[ed.head];
    const double term = 0.5 * cross(a, b) + ed.bulge;
    if (ed.left > 0) areas[ed.left - 1] += term;
    if (ed.right > 0) areas[ed.right - 1] -= term;
  }
  return areas;
}

inline AreaVector region_areas(const Cluster& c) {
  const WalkAnalysis w = boundary_walks(c);
  if (!w.ok) throw StructuralError("region_areas: " + w.problems.front());
  return region_areas_unchecked(c);
}

inline double perimeter(const Cluster& c) {
  double total = 0.0;
  for (int e = 0; e < c.edge_count(); ++e) total += arc_properties(c.arc(e)).length;
  return total;
}

// Diagonal of the bounding box of vertices and arc midpoints.
inline double length_scale(const Cluster& c) {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  auto grow = [&](Point p) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  };
  for (const Point& p : c.vertices) grow(p);
  for (int e = 0; e < c.edge_count(); ++e) grow(c.arc(e).point_at(0.5));
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

// ---------------------------------------------------------------------------
// Chart coordinates

inline Eigen::VectorXd pack_chart(const Cluster& c) {
  Eigen::VectorXd x(c.chart_dimension());
  for (int v = 0; v < c.vertex_count(); ++v) {
    x[2 * v] = c.vertices[v].x;
    x[2 * v + 1] = c.vertices[v].y;
  }
  for (int e = 0; e < c.edge_count(); ++e) x[2 * c.vertex_count() + e] = c.edges[e].bulge;
  return x;
}

inline Cluster unpack_chart(const Cluster& shape, const Eigen::VectorXd& x) {
  Cluster c = shape;
  for (int v = 0; v < c.vertex_count(); ++v) c.vertices[v] = {x[2 * v], x[2 * v + 1]};
  for (int e = 0; e < c.edge_count(); ++e) c.edges[e].bulge = x[2 * c.vertex_count() + e];
  return c;
}

// d A / d (bulge columns) is the exact incidence pattern.
inline void fill_bulge_columns(const Cluster& c, Eigen::MatrixXd& jac) {
  const int off = 2 * c.vertex_count();
  for (int e = 0; e < c.edge_count(); ++e) {
    if (c.edges[e].left > 0) jac(c.edges[e].left - 1, off + e) = 1.0;
    if (c.edges[e].right > 0) jac(c.edges[e].right - 1, off + e) = -1.0;
  }
}

// n x (2v + e) area Jacobian. Vertex columns by central differences with
// step fd_step * length_scale, bulge columns exact.
inline Eigen::MatrixXd area_jacobian(const Cluster& c, const TolerancePolicy& tol = {}) {
  const int n = c.region_count, v = c.vertex_count();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, c.chart_dimension());
  const double h = tol.fd_step * length_scale(c);
  Cluster probe = c;
  for (int k = 0; k < 2 * v; ++k) {
    double& coord = (k % 2 == 0) ? probe.vertices[k / 2].x : probe.vertices[k / 2].y;
    const double saved = coord;
    coord = saved + h;
    const AreaVector up = region_areas_unchecked(probe);
    coord = saved - h;
    const AreaVector down = region_areas_unchecked(probe);
    coord = saved;
    jac.col(k) = (up - down) / (2.0 * h);
  }
  fill_bulge_columns(c, jac);
  return jac;
}

// Same matrix from the closed-form shoelace derivatives.
inline Eigen::MatrixXd area_jacobian_analytic(const Cluster& c) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(c.region_count, c.chart_dimension());
  for (const auto& ed : c.edges) {
    const Point a = c.vertices[ed.tail], b = c.vertices[ed.head];
    for (auto [region, sign] : {std::pair{ed.left, 1.0}, std::pair{ed.right, -1.0}}) {
      if (region == kExterior) continue;
      jac(region - 1, 2 * ed.tail) += sign * 0.5 * b.y;
      jac(region - 1, 2 * ed.tail + 1) -= sign * 0.5 * b.x;
      jac(region - 1, 2 * ed.head) -= sign * 0.5 * a.y;
      jac(region - 1, 2 * ed.head + 1) += sign * 0.5 * a.x;
    }
  }
  fill_bulge_columns(c, jac);
  return jac;
}

// ---------------------------------------------------------------------------
// Maps and queries

// Image of the whole cluster under a Moebius map (vertices pointwise, arcs by
// three-point fitting). Region labels are kept; the caller is responsible for
// keeping the pole in the exterior.
inline Cluster mobius_apply_cluster(const MobiusMap& m, const Cluster& c) {
  Cluster out = c;
  for (auto& p : out.vertices) p = mobius_apply_point(m, p);
  for (int e = 0; e < c.edge_count(); ++e) out.edges[e].bulge = mobius_apply_arc(m, c.arc(e)).bulge;
  return out;
}

// Random map whose pole lies 1.5 to 4 length scales from the vertex
// centroid, hence in the exterior; the exterior stays unbounded.
inline MobiusMap random_mobius(const Cluster& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi), radius(1.5, 4.0), unit_box(-1.0, 1.0);
  Point g{};
  for (const Point& p : c.vertices) g += p;
  g = g / static_cast<double>(c.vertex_count());
  const double ell = length_scale(c);
  for (;;) {
    const Complex pole = (g + ell * radius(rng) * unit_from_angle(angle(rng))).to_complex();
    const Complex a = ell * std::polar(1.0, angle(rng));
    const Complex b = ell * ell * Complex{unit_box(rng), unit_box(rng)};
    const MobiusMap m{a, b, {1.0, 0.0}, -pole};
    if (m.is_valid()) return m.normalized();
  }
}

inline Cluster translated(const Cluster& c, Point t) {
  Cluster out = c;
  for (auto& p : out.vertices) p += t;
  return out;
}

inline Cluster rotated(const Cluster& c, double angle, Point about = {}) {
  Cluster out = c;
  for (auto& p : out.vertices) p = about + rotate(p - about, angle);
  return out;
}

inline Cluster scaled(const Cluster& c, double s) {
  Cluster out = c;
  for (auto& p : out.vertices) p *= s;
  for (auto& e : out.edges) e.bulge *= s * s;
  return out;
}

// Region containing p, by winding numbers of finely sampled boundaries.
inline int locate_region(const Cluster& c, Point p, int samples = 256) {
  std::vector<double> winding(c.region_count + 1, 0.0);
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto pts = detail::sample_arc(c.arc(e), samples);
    double turn = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) turn += signed_angle(pts[i] - p, pts[i + 1] - p);
    winding[c.edges[e].left] += turn;
    winding[c.edges[e].right] -= turn;
  }
  for (int r = 1; r <= c.region_count; ++r)
    if (winding[r] > kPi) return r;
  return kExterior;
}

// Largest vertex displacement and bulge difference between two clusters of
// the same combinatorial type.
inline double max_vertex_displacement(const Cluster& a, const Cluster& b) {
  if (a.vertex_count() != b.vertex_count()) throw DomainError("vertex counts differ");
  double worst = 0.0;
  for (int v = 0; v < a.vertex_count(); ++v) worst = std::max(worst, distance(a.vertices[v], b.vertices[v]));
  return worst;
}

inline double max_bulge_difference(const Cluster& a, const Cluster& b) {
  if (a.edge_count() != b.edge_count()) throw DomainError("edge counts differ");
  double worst = 0.0;
  for (int e = 0; e < a.edge_count(); ++e) worst = std::max(worst, std::abs(a.edges[e].bulge - b.edges[e].bulge));
  return worst;
}

}  // namespace foamlab
