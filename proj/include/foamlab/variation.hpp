#pragma once

// Tangent-space dimension of the equilibrium variety (numerical rank of the
// stacked constraint Jacobian), second-variation stability on a discretized
// cluster, and area continuation.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "foamlab/cluster.hpp"
#include "foamlab/equilibrium.hpp"
#include "foamlab/errors.hpp"
#include "foamlab/geometry.hpp"
#include "foamlab/tolerance.hpp"

namespace foamlab {

// ---------------------------------------------------------------------------
// Rigid motions

// Columns: x-translation, y-translation, rotation about the vertex centroid,
// as chart tangent vectors (bulge entries exactly 0), orthonormalized.
// With `length` > 0 the vectors are expressed in chart coordinates
// normalized by that length (vertices / L, bulges / L^2).
inline Eigen::MatrixXd rigid_motion_basis(const Cluster& c, double length = 0.0) {
  const int v = c.vertex_count();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(c.chart_dimension(), 3);
  Point centroid{};
  for (const Point& p : c.vertices) centroid += p;
  centroid = centroid / static_cast<double>(v);
  const double s = length > 0.0 ? 1.0 / length : 1.0;
  for (int i = 0; i < v; ++i) {
    const Point d = (c.vertices[i] - centroid) * s;
    basis(2 * i, 0) = 1.0;
    basis(2 * i + 1, 1) = 1.0;
    basis(2 * i, 2) = -d.y;
    basis(2 * i + 1, 2) = d.x;
  }
  // Gram-Schmidt; the translations are already orthogonal.
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < k; ++j) basis.col(k) -= basis.col(j).dot(basis.col(k)) * basis.col(j);
    basis.col(k).normalize();
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Tangent dimension

struct TangentReport {
  std::vector<double> singular_values;  // descending
  int nullity = 0;
  double gap_ratio = 0.0;
  bool ambiguous = false;
  // Null space basis (columns).
  Eigen::MatrixXd mode_basis;
  int rows = 0, cols = 0;
  int rank() const { return cols - nullity; }
};

namespace detail {

// Local length of each vertex (mean chord of its edges) and each edge (its
// chord). Clusters mixing tiny and large features, like the necklace chamber,
// are only well conditioned when every column and row is measured in its own
// local units.
struct LocalScales {
  std::vector<double> vertex;
  std::vector<double> edge;
};

inline LocalScales local_scales(const Cluster& c) {
  LocalScales s;
  s.vertex.assign(c.vertices.size(), 0.0);
  std::vector<int> count(c.vertices.size(), 0);
  for (int e = 0; e < c.edge_count(); ++e) {
    const double chord = c.arc(e).chord_length();
    s.edge.push_back(chord);
    for (int v : {c.edges[e].tail, c.edges[e].head}) {
      s.vertex[v] += chord;
      ++count[v];
    }
  }
  for (std::size_t v = 0; v < s.vertex.size(); ++v) s.vertex[v] /= std::max(count[v], 1);
  return s;
}

// Jacobians of the residual blocks and of the areas in locally scaled
// coordinates: vertex coordinates in units of the vertex scale, bulges in
// units of chord^2; cocycle rows times the vertex scale, area rows divided by
// the region area. Row and column scalings leave the null space dimension
// unchanged.
struct ConstraintJacobians {
  Eigen::MatrixXd residual;  // 3v rows: angle block then cocycle block
  Eigen::MatrixXd area;      // n rows
  Eigen::VectorXd column_scale;  // chart coordinate = column_scale * scaled coordinate
};

inline ConstraintJacobians constraint_jacobians(const Cluster& c, const TolerancePolicy& tol) {
  const AreaVector areas = region_areas_unchecked(c);
  const EquilibriumSystem sys(c, areas);
  const double big = sys.scale();
  const LocalScales ls = local_scales(c);
  const int v = c.vertex_count(), e = c.edge_count(), n = c.region_count;
  Eigen::VectorXd col(2 * v + e), steps(2 * v + e);
  for (int i = 0; i < v; ++i) {
    col[2 * i] = col[2 * i + 1] = ls.vertex[i];
    steps[2 * i] = steps[2 * i + 1] = tol.fd_step * ls.vertex[i] / big;
  }
  for (int k = 0; k < e; ++k) {
    col[2 * v + k] = ls.edge[k] * ls.edge[k];
    steps[2 * v + k] = tol.fd_step * col[2 * v + k] / (big * big);
  }
  // System columns are x / L and b / L^2; convert to local units.
  Eigen::MatrixXd full = sys.jacobian(sys.to_normalized(c), steps);
  for (int k = 0; k < 2 * v; ++k) full.col(k) *= col[k] / big;
  for (int k = 2 * v; k < 2 * v + e; ++k) full.col(k) *= col[k] / (big * big);
  // Rows: cocycle entries carry a factor L, areas a factor 1 / L^2.
  for (int i = 0; i < v; ++i) full.row(2 * v + i) *= ls.vertex[i] / big;
  for (int i = 0; i < n; ++i) full.row(3 * v + i) *= big * big / areas[i];
  return {full.topRows(3 * v), full.middleRows(3 * v, n), col};
}

}  // namespace detail

inline TangentReport rank_report(const Eigen::MatrixXd& m, const TolerancePolicy& tol) {
  TangentReport r;
  r.rows = static_cast<int>(m.rows());
  r.cols = static_cast<int>(m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s[0] : 0.0;
  const double cut = tol.rank_cut * smax;
  int rank = 0;
  while (rank < s.size() && s[rank] >= cut) ++rank;
  r.nullity = r.cols - rank;
  const double smallest_kept = rank > 0 ? s[rank - 1] : 0.0;
  const double largest_dropped = rank < s.size() ? std::max(s[rank], 0.0) : 0.0;
  const double denom = largest_dropped > 0.0 ? largest_dropped : cut;
  r.gap_ratio = denom > 0.0 ? smallest_kept / denom : std::numeric_limits<double>::infinity();
  r.ambiguous = r.gap_ratio < tol.gap_factor;
  r.mode_basis = svd.matrixV().rightCols(r.nullity);
  return r;
}

// Local dimension of the equilibrium variety modulo rigid motions (with
// fix_areas: of its fixed-area slice), as the nullity of
// [d(angle, cocycle); rigid rows; dA if fix_areas] in locally scaled
// coordinates. mode_basis columns are in those scaled coordinates.
inline TangentReport tangent_dimension(const Cluster& c, bool fix_areas, const TolerancePolicy& tol = {}) {
  const auto jac = detail::constraint_jacobians(c, tol);
  // Rigid directions expressed in the scaled coordinates.
  Eigen::MatrixXd rigid = jac.column_scale.cwiseInverse().asDiagonal() * rigid_motion_basis(c);
  Eigen::HouseholderQR<Eigen::MatrixXd> rigid_qr(rigid);
  rigid = rigid_qr.householderQ() * Eigen::MatrixXd::Identity(rigid.rows(), 3);
  const int rows = static_cast<int>(jac.residual.rows()) + 3 + (fix_areas ? c.region_count : 0);
  Eigen::MatrixXd m(rows, c.chart_dimension());
  m.topRows(jac.residual.rows()) = jac.residual;
  m.middleRows(jac.residual.rows(), 3) = rigid.transpose();
  if (fix_areas) m.bottomRows(c.region_count) = jac.area;
  return rank_report(m, tol);
}

// Rank report of the area Jacobian alone, rows divided by the region areas
// and columns in local units.
inline TangentReport area_rank(const Cluster& c, const TolerancePolicy& tol = {}) {
  Eigen::MatrixXd jac = area_jacobian(c, tol);
  const AreaVector areas = region_areas_unchecked(c);
  const detail::LocalScales ls = detail::local_scales(c);
  const int v = c.vertex_count();
  for (int i = 0; i < v; ++i) jac.middleCols(2 * i, 2) *= ls.vertex[i];
  for (int e = 0; e < c.edge_count(); ++e) jac.col(2 * v + e) *= ls.edge[e] * ls.edge[e];
  for (int i = 0; i < c.region_count; ++i) jac.row(i) /= areas[i];
  return rank_report(jac, tol);
}

// ---------------------------------------------------------------------------
// Discretization

struct PolylineCluster {
  std::vector<Point> points;  // junctions first (same ids as the vertices)
  // points along each edge, tail to head, m + 1 entries
  std::vector<std::vector<int>> edge_points;
  std::vector<int> left, right;
  int region_count = 0;
  int junction_count = 0;

  double perimeter() const {
    double total = 0.0;
    for (const auto& ids : edge_points)
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) total += distance(points[ids[i]], points[ids[i + 1]]);
    return total;
  }
  Eigen::VectorXd areas() const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(region_count);
    for (std::size_t e = 0; e < edge_points.size(); ++e) {
      double term = 0.0;
      const auto& ids = edge_points[e];
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) term += 0.5 * cross(points[ids[i]], points[ids[i + 1]]);
      if (left[e] > 0) a[left[e] - 1] += term;
      if (right[e] > 0) a[right[e] - 1] -= term;
    }
    return a;
  }
};

// Replaces each arc by m segments equally spaced in turning angle.
inline PolylineCluster discretize(const Cluster& c, int m) {
  if (m < 8) throw DomainError("discretize: at least 8 points per edge required");
  PolylineCluster out;
  out.points = c.vertices;
  out.junction_count = c.vertex_count();
  out.region_count = c.region_count;
  for (int e = 0; e < c.edge_count(); ++e) {
    const Arc arc = c.arc(e);
    const double phi = arc.half_angle();
    std::vector<int> ids{c.edges[e].tail};
    for (int i = 1; i < m; ++i) {
      ids.push_back(static_cast<int>(out.points.size()));
      out.points.push_back(arc.point_at(static_cast<double>(i) / m, phi));
    }
    ids.push_back(c.edges[e].head);
    out.edge_points.push_back(std::move(ids));
    out.left.push_back(c.edges[e].left);
    out.right.push_back(c.edges[e].right);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second variation

enum class StabilityClass { StrictlyStable, Degenerate, Unstable };

struct HessianReport {
  std::vector<double> eigenvalues;  // ascending
  int zero_mode_count = 0;
  int negative_count = 0;
  StabilityClass classification = StabilityClass::StrictlyStable;
  int m = 0;
  double threshold = 0.0;
  // Zero-mode counts at m and 2m disagree.
  bool ambiguous = false;
  std::vector<double> refined_eigenvalues;  // at 2m, when computed
  // sqrt(g^T M^-1 g) of the discrete Lagrangian gradient in reduced coordinates.
  double gradient_norm = 0.0;

  std::string describe() const {
    switch (classification) {
      case StabilityClass::StrictlyStable: return "StrictlyStable";
      case StabilityClass::Degenerate: return "Degenerate(" + std::to_string(zero_mode_count) + ")";
      case StabilityClass::Unstable: return "Unstable(" + std::to_string(negative_count) + ")";
    }
    return "?";
  }
};

namespace detail {

struct ProjectedHessian {
  Eigen::VectorXd eigenvalues;
  double gradient_norm = 0.0;
};

// Discrete Lagrangian L = perimeter - sum_e (p_L - p_R) * (shoelace term of
// edge e), assembled in point coordinates and pulled back to reduced
// coordinates: junctions move freely, interior points follow the linear
// interpolation of their edge's junction motion plus a displacement along
// the arc normal. Returns the spectrum of the Hessian restricted to
// area-preserving directions orthogonal to rigid motions, relative to the
// discrete H1 inner product sum |du|^2 / len + |u|^2 len / ell^2. That metric
// keeps the top of the spectrum near 1 for every m, so a relative zero
// threshold stays meaningful under refinement.
inline ProjectedHessian projected_hessian(const Cluster& c, const PressureVector& p, int m) {
  const PolylineCluster poly = discretize(c, m);
  const int nj = poly.junction_count;
  const int np = static_cast<int>(poly.points.size());
  const int full = 2 * np;
  const int dofs = 2 * nj + (np - nj);
  const double ell = length_scale(c);

  // Reduced -> point coordinates.
  Eigen::MatrixXd pull = Eigen::MatrixXd::Zero(full, dofs);
  for (int j = 0; j < nj; ++j) {
    pull(2 * j, 2 * j) = 1.0;
    pull(2 * j + 1, 2 * j + 1) = 1.0;
  }
  for (std::size_t e = 0; e < poly.edge_points.size(); ++e) {
    const Arc arc = c.arc(static_cast<int>(e));
    const double phi = arc.half_angle();
    const auto& ids = poly.edge_points[e];
    const int tail = ids.front(), head = ids.back();
    for (int i = 1; i < m; ++i) {
      const double t = static_cast<double>(i) / m;
      const int pt = ids[i];
      const Point nrm = perp(arc.tangent_at(t, phi));
      for (int d = 0; d < 2; ++d) {
        pull(2 * pt + d, 2 * tail + d) = 1.0 - t;
        pull(2 * pt + d, 2 * head + d) = t;
      }
      const int col = 2 * nj + pt - nj;
      pull(2 * pt, col) = nrm.x;
      pull(2 * pt + 1, col) = nrm.y;
    }
  }

  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(full, full);
  Eigen::MatrixXd metric = Eigen::MatrixXd::Zero(full, full);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(full);
  Eigen::MatrixXd area_grad = Eigen::MatrixXd::Zero(poly.region_count, full);
  auto add2 = [](Eigen::MatrixXd& mat, int i, int j, const Eigen::Matrix2d& blk) {
    mat.block<2, 2>(2 * i, 2 * j) += blk;
  };

  for (std::size_t e = 0; e < poly.edge_points.size(); ++e) {
    const double dp = p.values[poly.left[e]] - p.values[poly.right[e]];
    const auto& ids = poly.edge_points[e];
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      const int ia = ids[i], ib = ids[i + 1];
      const Point a = poly.points[ia], b = poly.points[ib];
      const double len = distance(a, b);
      const Eigen::Vector2d u((b.x - a.x) / len, (b.y - a.y) / len);
      // Length: gradient (-u, u), Hessian blocks +-(I - u u^T) / len.
      const Eigen::Matrix2d k = (Eigen::Matrix2d::Identity() - u * u.transpose()) / len;
      // Shoelace term 0.5 cross(a, b): mixed second derivative d2/da db = 0.5 J.
      Eigen::Matrix2d j;
      j << 0.0, 0.5, -0.5, 0.0;
      add2(hess, ia, ia, k);
      add2(hess, ib, ib, k);
      add2(hess, ia, ib, -k - dp * j);
      add2(hess, ib, ia, -k - dp * j.transpose());
      const Eigen::Vector2d area_a(0.5 * b.y, -0.5 * b.x), area_b(-0.5 * a.y, 0.5 * a.x);
      grad.segment<2>(2 * ia) += -u - dp * area_a;
      grad.segment<2>(2 * ib) += u - dp * area_b;
      for (auto [reg, sign] : {std::pair{poly.left[e], 1.0}, std::pair{poly.right[e], -1.0}}) {
        if (reg <= 0) continue;
        area_grad.block<1, 2>(reg - 1, 2 * ia) += sign * area_a.transpose();
        area_grad.block<1, 2>(reg - 1, 2 * ib) += sign * area_b.transpose();
      }
      const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
      const double w = 1.0 / len, mw = 0.5 * len / (ell * ell);
      add2(metric, ia, ia, (w + mw) * id);
      add2(metric, ib, ib, (w + mw) * id);
      add2(metric, ia, ib, -w * id);
      add2(metric, ib, ia, -w * id);
    }
  }

  const Eigen::MatrixXd a_red = pull.transpose() * hess * pull;
  const Eigen::MatrixXd b_red = pull.transpose() * metric * pull;
  const Eigen::VectorXd g_red = pull.transpose() * grad;
  const Eigen::MatrixXd area_red = area_grad * pull;

  // Rigid fields in reduced coordinates: exact at junctions, normal
  // components exact at interior points.
  Point centroid{};
  for (int i = 0; i < nj; ++i) centroid += poly.points[i];
  centroid = centroid / static_cast<double>(nj);
  Eigen::MatrixXd rigid = Eigen::MatrixXd::Zero(dofs, 3);
  for (int kf = 0; kf < 3; ++kf) {
    Eigen::VectorXd field(full);
    for (int pt = 0; pt < np; ++pt) {
      const Point d = poly.points[pt] - centroid;
      const Point f = kf == 0 ? Point{1.0, 0.0} : kf == 1 ? Point{0.0, 1.0} : Point{-d.y, d.x};
      field[2 * pt] = f.x;
      field[2 * pt + 1] = f.y;
    }
    for (int jn = 0; jn < nj; ++jn) rigid.block<2, 1>(2 * jn, kf) = field.segment<2>(2 * jn);
    const Eigen::VectorXd interp = pull.leftCols(2 * nj) * rigid.col(kf).head(2 * nj);
    for (int pt = nj; pt < np; ++pt) {
      const int col = 2 * nj + pt - nj;
      const Eigen::Vector2d nrm(pull(2 * pt, col), pull(2 * pt + 1, col));
      rigid(col, kf) = nrm.dot(field.segment<2>(2 * pt) - interp.segment<2>(2 * pt));
    }
  }
  Eigen::MatrixXd constraints(poly.region_count + 3, dofs);
  constraints.topRows(poly.region_count) = area_red;
  constraints.bottomRows(3) = (b_red * rigid).transpose();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints.transpose());
  const int kc = static_cast<int>(constraints.rows());
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd z = q.rightCols(dofs - kc);
  const Eigen::MatrixXd az = z.transpose() * a_red * z;
  const Eigen::MatrixXd bz = z.transpose() * b_red * z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(az, bz, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("stability: eigen-decomposition failed");
  ProjectedHessian out;
  out.eigenvalues = solver.eigenvalues();
  out.gradient_norm = std::sqrt(g_red.dot(b_red.ldlt().solve(g_red)));
  return out;
}

struct SpectrumCounts {
  int negative = 0;
  int zero = 0;
  double threshold = 0.0;
};

inline SpectrumCounts count_spectrum(const Eigen::VectorXd& ev, double rel) {
  SpectrumCounts s;
  s.threshold = rel * ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -s.threshold) ++s.negative;
    else if (ev[i] <= s.threshold) ++s.zero;
  }
  return s;
}

}  // namespace detail

// Second variation of perimeter at fixed areas, modulo rigid motions, on the
// m-point discretization. With `refine`, the spectrum is recomputed at 2m and
// the low eigenvalues are Richardson extrapolated, (4 lambda_2m - lambda_m) / 3,
// which is what gets classified: a discrete flat direction decays like 1/m^2
// and extrapolates to zero, a physical mode does not. A counted zero mode
// whose decay ratio is far from 4 marks the report ambiguous.
inline HessianReport stability_report(const Cluster& c, int m, const TolerancePolicy& tol = {}, bool refine = true) {
  const PressureVector p = pressures(c, tol);
  const detail::ProjectedHessian coarse = detail::projected_hessian(c, p, m);
  const detail::SpectrumCounts sc = detail::count_spectrum(coarse.eigenvalues, tol.eigen_rel);
  HessianReport r;
  r.m = m;
  r.eigenvalues.assign(coarse.eigenvalues.data(), coarse.eigenvalues.data() + coarse.eigenvalues.size());
  r.threshold = sc.threshold;
  r.gradient_norm = coarse.gradient_norm;
  r.negative_count = sc.negative;
  r.zero_mode_count = sc.zero;
  if (refine) {
    const detail::ProjectedHessian fine = detail::projected_hessian(c, p, 2 * m);
    r.refined_eigenvalues.assign(fine.eigenvalues.data(), fine.eigenvalues.data() + fine.eigenvalues.size());
    r.negative_count = 0;
    r.zero_mode_count = 0;
    const double tau = r.threshold;
    for (Eigen::Index i = 0; i < coarse.eigenvalues.size(); ++i) {
      const double lc = coarse.eigenvalues[i], lf = fine.eigenvalues[i];
      const double ext = (4.0 * lf - lc) / 3.0;
      if (ext < -tau) {
        ++r.negative_count;
      } else if (ext <= tau) {
        ++r.zero_mode_count;
        const bool both_small = std::abs(lc) <= tau && std::abs(lf) <= tau;
        const double ratio = lc / lf;
        if (!both_small && !(ratio > 2.0 && ratio < 8.0)) r.ambiguous = true;
      } else if (lf <= tau) {
        // Below threshold at 2m but extrapolating away from zero.
        r.ambiguous = true;
      }
    }
  }
  if (r.negative_count > 0) r.classification = StabilityClass::Unstable;
  else if (r.zero_mode_count > 0) r.classification = StabilityClass::Degenerate;
  else r.classification = StabilityClass::StrictlyStable;
  return r;
}

// ---------------------------------------------------------------------------
// Continuation

class ContinuationFailure : public Error {
 public:
  ContinuationFailure(const std::string& what, std::vector<Cluster> path)
      : Error(what), path_(std::move(path)) {}
  const std::vector<Cluster>& path() const { return path_; }

 private:
  std::vector<Cluster> path_;
};

// Follows the equilibrium family from `start` while the area targets move
// linearly to `target` in `steps` increments. Each step is corrected by
// solve(), seeded by a secant prediction (falling back to the previous
// cluster when the prediction fails).
inline std::vector<Cluster> continue_family(const Cluster& start, const AreaVector& target, int steps,
                                            const SolveOptions& opts = {}) {
  if (steps < 0) throw DomainError("continue_family: steps must be >= 0");
  std::vector<Cluster> path{start};
  if (steps == 0) return path;
  const AreaVector a0 = region_areas(start);
  if (target.size() != a0.size()) throw DomainError("continue_family: target has the wrong size");
  for (int s = 1; s <= steps; ++s) {
    const AreaVector goal = a0 + (target - a0) * (static_cast<double>(s) / steps);
    const Cluster& prev = path.back();
    std::optional<Cluster> next;
    if (path.size() >= 2) {
      const Eigen::VectorXd guess = 2.0 * pack_chart(prev) - pack_chart(path[path.size() - 2]);
      try {
        next = solve(unpack_chart(prev, guess), goal, opts);
      } catch (const Error&) {
        next.reset();
      }
    }
    if (!next) {
      try {
        next = solve(prev, goal, opts);
      } catch (const Error& err) {
        throw ContinuationFailure("continue_family: step " + std::to_string(s) + " failed: " + err.what(),
                                  path);
      }
    }
    path.push_back(*next);
  }
  return path;
}

// Largest vertex distance between two clusters of the same type after the
// best rigid alignment of b onto a (least squares on the vertices).
inline double aligned_distance(const Cluster& a, const Cluster& b) {
  if (a.vertex_count() != b.vertex_count()) throw DomainError("aligned_distance: vertex counts differ");
  const int v = a.vertex_count();
  Point ca{}, cb{};
  for (int i = 0; i < v; ++i) {
    ca += a.vertices[i];
    cb += b.vertices[i];
  }
  ca = ca / static_cast<double>(v);
  cb = cb / static_cast<double>(v);
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < v; ++i) {
    const Point pa = a.vertices[i] - ca, pb = b.vertices[i] - cb;
    sxx += dot(pb, pa);
    sxy += cross(pb, pa);
  }
  const double angle = std::atan2(sxy, sxx);
  double worst = 0.0;
  for (int i = 0; i < v; ++i)
    worst = std::max(worst, distance(ca + rotate(b.vertices[i] - cb, angle), a.vertices[i]));
  return worst;
}

}  // namespace foamlab
