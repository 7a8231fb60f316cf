#pragma once

// SVG 1.1 rendering: one path per edge, optional region fills by pressure.
// The y axis is flipped so that the picture matches the math orientation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include "foamlab/cluster.hpp"
#include "foamlab/equilibrium.hpp"
#include "foamlab/geometry.hpp"

namespace foamlab {

struct SvgStyle {
  double width = 480.0;  // pixels; height follows the aspect ratio
  double stroke_width = 0.004;  // relative to the cluster extent
  bool fill_by_pressure = false;
  std::string stroke = "#1a1a1a";
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Path commands that continue from the tail of `arc` to its head.
inline std::string arc_command(const Arc& arc) {
  const ArcProperties p = arc_properties(arc);
  const Point h = arc.head;
  if (!p.carrier.is_circle()) return "L " + fmt(h.x) + " " + fmt(-h.y);
  const double r = p.carrier.radius;
  const int large = std::abs(p.half_angle) > kPi / 2.0 ? 1 : 0;
  // y is flipped on output, which keeps the visual orientation: a
  // counterclockwise arc stays counterclockwise on screen, SVG sweep 0.
  const int sweep = p.half_angle > 0.0 ? 0 : 1;
  return "A " + fmt(r) + " " + fmt(r) + " 0 " + std::to_string(large) + " " + std::to_string(sweep) + " " +
         fmt(h.x) + " " + fmt(-h.y);
}

inline std::string move_to(Point p) { return "M " + fmt(p.x) + " " + fmt(-p.y); }

// Extreme points of an arc: its endpoints and any axis-aligned extreme of
// the carrier that the arc passes through.
inline void extend_box(const Arc& arc, double& x0, double& y0, double& x1, double& y1) {
  auto add = [&](Point p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  };
  add(arc.tail);
  add(arc.head);
  const double phi = arc.half_angle();
  for (int i = 1; i < 64; ++i) add(arc.point_at(i / 64.0, phi));
}

inline std::string pressure_color(double p, double lo, double hi) {
  const double t = hi > lo ? (p - lo) / (hi - lo) : 0.5;
  const int r = static_cast<int>(std::lround(230 - 90 * t));
  const int g = static_cast<int>(std::lround(240 - 60 * t));
  const int b = 255;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace detail

inline std::string to_svg(const Cluster& c, const SvgStyle& style = {}) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (int e = 0; e < c.edge_count(); ++e) detail::extend_box(c.arc(e), x0, y0, x1, y1);
  const double w = x1 - x0, h = y1 - y0;
  const double margin = 0.05 * std::max(w, h);
  const double vx = x0 - margin, vy = -y1 - margin, vw = w + 2 * margin, vh = h + 2 * margin;
  const double extent = std::max(vw, vh);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::fmt(style.width)
      << "\" height=\"" << detail::fmt(style.width * vh / vw) << "\" viewBox=\"" << detail::fmt(vx) << " "
      << detail::fmt(vy) << " " << detail::fmt(vw) << " " << detail::fmt(vh) << "\">\n";

  if (style.fill_by_pressure) {
    const PressureVector p = pressures_unchecked(c);
    const double lo = p.values.tail(c.region_count).minCoeff(), hi = p.values.tail(c.region_count).maxCoeff();
    const WalkAnalysis walks = boundary_walks(c);
    out << "<g id=\"regions\" stroke=\"none\">\n";
    for (int r = 1; r <= c.region_count && r < static_cast<int>(walks.walks.size()); ++r) {
      std::string d;
      for (const auto& walk : walks.walks[r]) {
        if (walk.empty()) continue;
        d += detail::move_to(c.vertices[origin(c, walk.front())]);
        for (const HalfEdge he : walk) d += " " + detail::arc_command(half_arc(c, he));
        d += " Z ";
      }
      out << "<path class=\"region\" data-region=\"" << r << "\" fill=\""
          << detail::pressure_color(p.values[r], lo, hi) << "\" fill-rule=\"evenodd\" d=\"" << d << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g id=\"edges\" fill=\"none\" stroke=\"" << style.stroke << "\" stroke-width=\""
      << detail::fmt(style.stroke_width * extent) << "\" stroke-linecap=\"round\">\n";
  for (int e = 0; e < c.edge_count(); ++e) {
    const Arc arc = c.arc(e);
    out << "<path class=\"edge\" data-edge=\"" << e << "\" d=\"" << detail::move_to(arc.tail) << " "
        << detail::arc_command(arc) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace foamlab
