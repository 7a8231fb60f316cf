#pragma once

// Residuals of the 120-degree and curvature-cocycle conditions, pressures,
// classification and the area-constrained equilibrium solver.
//
// Pressure convention: crossing an edge from its right region into its left
// region raises the pressure by the signed curvature, p_L - p_R = kappa.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "foamlab/cluster.hpp"
#include "foamlab/errors.hpp"
#include "foamlab/geometry.hpp"
#include "foamlab/tolerance.hpp"

namespace foamlab {

struct ResidualReport {
  // (sum of outgoing unit tangents) per vertex, interleaved x, y.
  Eigen::VectorXd angle_block;
  // Sum of outgoing signed curvatures per vertex, times the length scale.
  Eigen::VectorXd cocycle_block;
  double angle_sup = 0.0, angle_l2 = 0.0;
  double cocycle_sup = 0.0, cocycle_l2 = 0.0;
  double length_scale = 1.0;
};

namespace detail {

struct EdgeGeometry {
  Point tangent_tail;
  Point tangent_head;
  double curvature = 0.0;
  double half_angle = 0.0;
};

inline std::vector<EdgeGeometry> edge_geometry(const Cluster& c) {
  std::vector<EdgeGeometry> out(c.edges.size());
  for (int e = 0; e < c.edge_count(); ++e) {
    const ArcProperties p = arc_properties(c.arc(e));
    out[e] = {p.tangent_at_tail, p.tangent_at_head, p.signed_curvature, p.half_angle};
  }
  return out;
}

inline void fill_blocks(const Cluster& c, const std::vector<EdgeGeometry>& geo, double scale,
                        Eigen::Ref<Eigen::VectorXd> angle, Eigen::Ref<Eigen::VectorXd> cocycle) {
  angle.setZero();
  cocycle.setZero();
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edges[e];
    angle[2 * ed.tail] += geo[e].tangent_tail.x;
    angle[2 * ed.tail + 1] += geo[e].tangent_tail.y;
    angle[2 * ed.head] -= geo[e].tangent_head.x;
    angle[2 * ed.head + 1] -= geo[e].tangent_head.y;
    cocycle[ed.tail] += geo[e].curvature * scale;
    cocycle[ed.head] -= geo[e].curvature * scale;
  }
}

inline void require_trivalent(const Cluster& c) {
  std::vector<int> degree(c.vertices.size(), 0);
  for (const auto& ed : c.edges) {
    if (ed.tail < 0 || ed.tail >= c.vertex_count() || ed.head < 0 || ed.head >= c.vertex_count())
      throw StructuralError("edge refers to a missing vertex");
    ++degree[ed.tail];
    ++degree[ed.head];
  }
  for (std::size_t v = 0; v < degree.size(); ++v)
    if (degree[v] != 3)
      throw StructuralError("vertex " + std::to_string(v) + " has degree " +
                            std::to_string(degree[v]));
}

}  // namespace detail

inline ResidualReport residuals(const Cluster& c) {
  detail::require_trivalent(c);
  ResidualReport r;
  r.length_scale = length_scale(c);
  r.angle_block.resize(2 * c.vertex_count());
  r.cocycle_block.resize(c.vertex_count());
  detail::fill_blocks(c, detail::edge_geometry(c), r.length_scale, r.angle_block, r.cocycle_block);
  r.angle_sup = r.angle_block.lpNorm<Eigen::Infinity>();
  r.angle_l2 = r.angle_block.norm();
  r.cocycle_sup = r.cocycle_block.lpNorm<Eigen::Infinity>();
  r.cocycle_l2 = r.cocycle_block.norm();
  return r;
}

// ---------------------------------------------------------------------------
// Pressures

struct PressureVector {
  // values[0] is the exterior (always 0), values[i] region i.
  Eigen::VectorXd values;
  // Largest |p_L - p_R - kappa| over all edges.
  double defect = 0.0;
  double curvature_scale = 1.0;
  double relative_defect() const { return defect / curvature_scale; }
};

// Pressures by breadth-first accumulation without the consistency check.
inline PressureVector pressures_unchecked(const Cluster& c) {
  const auto geo = detail::edge_geometry(c);
  PressureVector out;
  out.values = Eigen::VectorXd::Zero(c.region_count + 1);
  std::vector<std::vector<std::pair<int, int>>> adj(c.region_count + 1);
  for (int e = 0; e < c.edge_count(); ++e) {
    adj[c.edges[e].left].push_back({e, c.edges[e].right});
    adj[c.edges[e].right].push_back({e, c.edges[e].left});
  }
  std::vector<char> seen(c.region_count + 1, 0);
  std::queue<int> queue;
  queue.push(kExterior);
  seen[kExterior] = 1;
  while (!queue.empty()) {
    const int r = queue.front();
    queue.pop();
    for (auto [e, other] : adj[r]) {
      if (seen[other]) continue;
      seen[other] = 1;
      const double kappa = geo[e].curvature;
      out.values[other] = (c.edges[e].left == other) ? out.values[r] + kappa : out.values[r] - kappa;
      queue.push(other);
    }
  }
  for (int r = 0; r <= c.region_count; ++r)
    if (!seen[r]) throw StructuralError("region " + std::to_string(r) + " is unreachable from the exterior");
  double kmax = 0.0;
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edges[e];
    out.defect = std::max(out.defect, std::abs(out.values[ed.left] - out.values[ed.right] - geo[e].curvature));
    kmax = std::max(kmax, std::abs(geo[e].curvature));
  }
  out.curvature_scale = std::max(kmax, 1.0 / length_scale(c));
  return out;
}

inline PressureVector pressures(const Cluster& c, const TolerancePolicy& tol = {}) {
  PressureVector p = pressures_unchecked(c);
  if (p.relative_defect() > tol.pressure_defect) {
    std::ostringstream msg;
    msg << "pressures are path dependent (defect " << p.defect << ")";
    throw PathInconsistent(msg.str(), p.defect);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Classification

enum class Verdict { NonEquilibrium, QuasiEquilibrium, Equilibrium };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NonEquilibrium: return "NonEquilibrium";
    case Verdict::QuasiEquilibrium: return "QuasiEquilibrium";
    case Verdict::Equilibrium: return "Equilibrium";
  }
  return "?";
}

struct Classification {
  Verdict verdict = Verdict::NonEquilibrium;
  ResidualReport residuals;
  // Second common point of the carriers found at every vertex. Only
  // evaluated for Equilibrium verdicts.
  bool concurrency_ok = false;
  std::vector<std::string> notes;
};

// Carriers of the three edges at vertex v, oriented away from v.
inline std::array<OrientedCircleLine, 3> outgoing_carriers(const Cluster& c, int v) {
  std::array<OrientedCircleLine, 3> out;
  int k = 0;
  for (int e = 0; e < c.edge_count(); ++e) {
    for (bool fwd : {true, false}) {
      if ((fwd ? c.edges[e].tail : c.edges[e].head) != v) continue;
      if (k == 3) throw StructuralError("vertex " + std::to_string(v) + " has degree above 3");
      const Arc a = fwd ? c.arc(e) : c.arc(e).reversed();
      out[k++] = arc_properties(a).carrier;
    }
  }
  if (k != 3) throw StructuralError("vertex " + std::to_string(v) + " has degree below 3");
  return out;
}

inline Classification classify(const Cluster& c, const TolerancePolicy& tol = {}) {
  Classification out;
  out.residuals = residuals(c);
  const bool angles = out.residuals.angle_sup < tol.equilibrium;
  const bool cocycle = out.residuals.cocycle_sup < tol.equilibrium;
  if (!angles) {
    out.verdict = Verdict::NonEquilibrium;
    return out;
  }
  if (!cocycle) {
    out.verdict = Verdict::QuasiEquilibrium;
    return out;
  }
  out.verdict = Verdict::Equilibrium;
  out.concurrency_ok = true;
  for (int v = 0; v < c.vertex_count(); ++v) {
    try {
      (void)second_intersection(outgoing_carriers(c, v), c.vertices[v]);
    } catch (const Error& err) {
      out.concurrency_ok = false;
      out.notes.push_back("vertex " + std::to_string(v) + ": " + err.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solver

struct SolveOptions {
  // Residual threshold for all three blocks (areas measured in units of L^2).
  double tol = 1e-11;
  int max_iter = 200;
  double lambda_init = 1e-3;
  double lambda_up = 2.0;
  double lambda_down = 0.5;
  TolerancePolicy policy{};

  // Reads flat "key=value" settings; unknown keys are rejected.
  void set(const std::string& key, const std::string& value) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw DomainError("solver option '" + key + "' needs a number, got '" + value + "'");
    }
    if (key == "tol") tol = v;
    else if (key == "max_iter") max_iter = static_cast<int>(v);
    else if (key == "lambda_init") lambda_init = v;
    else if (key == "lambda_up") lambda_up = v;
    else if (key == "lambda_down") lambda_down = v;
    else if (key == "fd_step") policy.fd_step = v;
    else throw DomainError("unknown solver option '" + key + "'");
  }
  static SolveOptions from_config(const std::string& text) {
    SolveOptions o;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
      o.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return o;
  }
};

struct SolveStats {
  int iterations = 0;
  std::vector<double> history;
};

namespace detail {

// Stacked normalized residual [angle; cocycle; areas - target; gauge].
class EquilibriumSystem {
 public:
  EquilibriumSystem(const Cluster& shape, const AreaVector& target)
      : shape_(shape), target_(target), scale_(length_scale(shape)) {
    anchor_ = shape.vertices.at(0);
    for (int e = 0; e < shape.edge_count() && gauge_edge_ < 0; ++e)
      if (shape.edges[e].tail == 0 || shape.edges[e].head == 0) gauge_edge_ = e;
    if (gauge_edge_ < 0) throw StructuralError("vertex 0 has no incident edge");
    anchor_tangent_ = gauge_tangent(shape);
  }

  double scale() const { return scale_; }
  int rows() const { return 3 * shape_.vertex_count() + shape_.region_count + 3; }
  int cols() const { return shape_.chart_dimension(); }

  Eigen::VectorXd to_normalized(const Cluster& c) const {
    Eigen::VectorXd x = pack_chart(c);
    const int nv = 2 * c.vertex_count();
    x.head(nv) /= scale_;
    x.tail(c.edge_count()) /= scale_ * scale_;
    return x;
  }
  Cluster from_normalized(const Eigen::VectorXd& z) const {
    Eigen::VectorXd x = z;
    const int nv = 2 * shape_.vertex_count();
    x.head(nv) *= scale_;
    x.tail(shape_.edge_count()) *= scale_ * scale_;
    return unpack_chart(shape_, x);
  }

  // Throws TopologyBreakdown on degenerate edges.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& z) const {
    const Cluster c = from_normalized(z);
    for (int e = 0; e < c.edge_count(); ++e) {
      const double chord = c.arc(e).chord_length();
      if (!(chord >= 1e-8 * scale_))
        throw TopologyBreakdown("edge " + std::to_string(e) + " collapsed");
      double phi = 0.0;
      try {
        phi = c.arc(e).half_angle();
      } catch (const DomainError&) {
        throw TopologyBreakdown("edge " + std::to_string(e) + " closed into a full circle");
      }
      if (std::abs(phi) > kPi - 1e-3)
        throw TopologyBreakdown("edge " + std::to_string(e) + " nearly closed into a circle");
    }
    const int v = c.vertex_count(), n = c.region_count;
    Eigen::VectorXd r(rows());
    detail::fill_blocks(c, edge_geometry(c), scale_, r.segment(0, 2 * v), r.segment(2 * v, v));
    r.segment(3 * v, n) = (region_areas_unchecked(c) - target_) / (scale_ * scale_);
    const Point shift = (c.vertices[0] - anchor_) / scale_;
    r[3 * v + n] = shift.x;
    r[3 * v + n + 1] = shift.y;
    r[3 * v + n + 2] = cross(anchor_tangent_, gauge_tangent(c));
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z, double h) const {
    return jacobian(z, Eigen::VectorXd::Constant(cols(), h));
  }

  // Central differences with a separate step per column.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z, const Eigen::VectorXd& steps) const {
    Eigen::MatrixXd jac(rows(), cols());
    Eigen::VectorXd probe = z;
    for (int k = 0; k < cols(); ++k) {
      const double h = steps[k];
      probe[k] = z[k] + h;
      const Eigen::VectorXd up = evaluate(probe);
      probe[k] = z[k] - h;
      const Eigen::VectorXd down = evaluate(probe);
      probe[k] = z[k];
      jac.col(k) = (up - down) / (2.0 * h);
    }
    return jac;
  }

  // Largest entry of each block: angle, cocycle, area.
  std::array<double, 3> block_sups(const Eigen::VectorXd& r) const {
    const int v = shape_.vertex_count(), n = shape_.region_count;
    return {r.segment(0, 2 * v).lpNorm<Eigen::Infinity>(),
            r.segment(2 * v, v).lpNorm<Eigen::Infinity>(),
            r.segment(3 * v, n).lpNorm<Eigen::Infinity>()};
  }

 private:
  Point gauge_tangent(const Cluster& c) const {
    const ArcProperties p = arc_properties(c.arc(gauge_edge_));
    return c.edges[gauge_edge_].tail == 0 ? p.tangent_at_tail : -p.tangent_at_head;
  }

  Cluster shape_;
  AreaVector target_;
  double scale_;
  Point anchor_;
  Point anchor_tangent_;
  int gauge_edge_ = -1;
};

}  // namespace detail

// Levenberg-Marquardt on the stacked system. The returned cluster keeps the
// combinatorial type of `initial`; vertex 0 and the direction of its first
// incident edge are held fixed.
inline Cluster solve(const Cluster& initial, const AreaVector& target, const SolveOptions& opts = {},
                     SolveStats* stats = nullptr) {
  if (target.size() != initial.region_count)
    throw DomainError("target has " + std::to_string(target.size()) + " entries, expected " +
                      std::to_string(initial.region_count));
  for (int i = 0; i < target.size(); ++i)
    if (!(target[i] > 0.0)) throw DomainError("target areas must be positive");
  detail::require_trivalent(initial);

  const detail::EquilibriumSystem sys(initial, target);
  Eigen::VectorXd z = sys.to_normalized(initial);
  Eigen::VectorXd r = sys.evaluate(z);
  std::vector<double> history{r.norm()};
  auto converged = [&](const Eigen::VectorXd& res) {
    const auto s = sys.block_sups(res);
    return s[0] < opts.tol && s[1] < opts.tol && s[2] < opts.tol;
  };
  if (stats) *stats = {};
  if (converged(r)) {
    if (stats) stats->history = history;
    return initial;
  }

  const double h = opts.policy.fd_step;
  Eigen::MatrixXd jac = sys.jacobian(z, h);
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  double lambda = opts.lambda_init * jtj.trace() / static_cast<double>(jtj.rows());
  const double lambda_ceiling = 1e16 * std::max(lambda, 1e-300);
  bool last_degenerate = false;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Eigen::VectorXd grad = jac.transpose() * r;
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += lambda;
      const Eigen::VectorXd step = a.ldlt().solve(-grad);
      const Eigen::VectorXd trial = z + step;
      try {
        const Eigen::VectorXd rt = sys.evaluate(trial);
        last_degenerate = false;
        if (rt.squaredNorm() < r.squaredNorm()) {
          z = trial;
          r = rt;
          lambda *= opts.lambda_down;
          accepted = true;
          break;
        }
      } catch (const TopologyBreakdown&) {
        last_degenerate = true;
      }
      lambda *= opts.lambda_up;
      if (lambda > lambda_ceiling) {
        if (stats) *stats = {iter, history};
        if (last_degenerate)
          throw TopologyBreakdown("solve: every step from iterate " + std::to_string(iter) +
                                  " degenerates an edge");
        throw NonConvergence("solve: no descent step available (stagnated)", history);
      }
    }
    history.push_back(r.norm());
    if (converged(r)) {
      if (stats) *stats = {iter, history};
      return sys.from_normalized(z);
    }
    jac = sys.jacobian(z, h);
    jtj = jac.transpose() * jac;
  }
  if (stats) *stats = {opts.max_iter, history};
  throw NonConvergence("solve: no convergence within " + std::to_string(opts.max_iter) + " iterations",
                       history);
}

}  // namespace foamlab
