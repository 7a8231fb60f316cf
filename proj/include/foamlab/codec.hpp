#pragma once

// Cluster documents (JSON) and JSON views of the analysis reports.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "foamlab/cluster.hpp"
#include "foamlab/desitter.hpp"
#include "foamlab/equilibrium.hpp"
#include "foamlab/errors.hpp"
#include "foamlab/variation.hpp"

namespace foamlab {

using Json = nlohmann::ordered_json;

inline constexpr int kDocumentVersion = 1;

inline Json cluster_to_json(const Cluster& c) {
  Json doc;
  doc["version"] = kDocumentVersion;
  Json verts = Json::array();
  for (int v = 0; v < c.vertex_count(); ++v)
    verts.push_back({{"id", v}, {"x", c.vertices[v].x}, {"y", c.vertices[v].y}});
  doc["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edges[e];
    edges.push_back({{"id", e}, {"tail", ed.tail}, {"head", ed.head}, {"bulge", ed.bulge},
                     {"left", ed.left}, {"right", ed.right}});
  }
  doc["edges"] = std::move(edges);
  Json regions = Json::array();
  for (int r = 0; r <= c.region_count; ++r) regions.push_back({{"id", r}, {"label", c.label(r)}});
  doc["regions"] = std::move(regions);
  doc["exterior"] = kExterior;
  return doc;
}

inline std::string to_json_text(const Cluster& c) { return cluster_to_json(c).dump(2) + "\n"; }

namespace detail {

inline const Json& field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

inline int int_field(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline double number_field(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(path + "." + key + ": not finite");
  return d;
}

inline const Json& array_field(const Json& obj, const char* key) {
  const Json& v = field(obj, "document", key);
  if (!v.is_array()) throw ParseError(std::string(key) + ": expected an array");
  return v;
}

// Items sorted by "id", which must run densely from `first`.
inline std::vector<const Json*> dense_items(const Json& arr, const std::string& name, int first) {
  std::vector<std::pair<int, const Json*>> items;
  for (std::size_t i = 0; i < arr.size(); ++i)
    items.push_back({int_field(arr[i], name + "[" + std::to_string(i) + "]", "id"), &arr[i]});
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<const Json*> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].first != first + static_cast<int>(i))
      throw ParseError(name + ": ids must run densely from " + std::to_string(first) + " (found " +
                       std::to_string(items[i].first) + ")");
    out.push_back(items[i].second);
  }
  return out;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline Cluster cluster_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("document: expected an object");
  const int version = detail::int_field(doc, "document", "version");
  if (version != kDocumentVersion) throw ParseError("version: unsupported value " + std::to_string(version));
  if (detail::int_field(doc, "document", "exterior") != kExterior) throw ParseError("exterior: must be 0");

  Cluster c;
  const Json& regions = detail::array_field(doc, "regions");
  // The exterior entry is optional.
  bool has_exterior = false;
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (detail::int_field(regions[i], "regions[" + std::to_string(i) + "]", "id") == kExterior) has_exterior = true;
  const auto reg = detail::dense_items(regions, "regions", has_exterior ? 0 : 1);
  c.region_count = static_cast<int>(reg.size()) - (has_exterior ? 1 : 0);
  if (c.region_count < 2) throw ParseError("regions: at least 2 interior regions required");
  c.region_labels.assign(c.region_count + 1, "");
  c.region_labels[0] = "exterior";
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const std::string path = "regions[id=" + std::to_string(i + (has_exterior ? 0 : 1)) + "]";
    const Json& label = detail::field(*reg[i], path, "label");
    if (!label.is_string()) throw ParseError(path + ".label: expected a string");
    c.region_labels[i + (has_exterior ? 0 : 1)] = label.get<std::string>();
  }

  const auto verts = detail::dense_items(detail::array_field(doc, "vertices"), "vertices", 0);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string path = "vertices[id=" + std::to_string(i) + "]";
    c.vertices.push_back({detail::number_field(*verts[i], path, "x"), detail::number_field(*verts[i], path, "y")});
  }
  const auto edges = detail::dense_items(detail::array_field(doc, "edges"), "edges", 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "edges[id=" + std::to_string(i) + "]";
    EdgeRecord ed;
    ed.tail = detail::int_field(*edges[i], path, "tail");
    ed.head = detail::int_field(*edges[i], path, "head");
    ed.bulge = detail::number_field(*edges[i], path, "bulge");
    ed.left = detail::int_field(*edges[i], path, "left");
    ed.right = detail::int_field(*edges[i], path, "right");
    for (int v : {ed.tail, ed.head})
      if (v < 0 || v >= c.vertex_count()) throw ParseError(path + ": vertex " + std::to_string(v) + " does not exist");
    for (int r : {ed.left, ed.right})
      if (r < 0 || r > c.region_count) throw ParseError(path + ": region " + std::to_string(r) + " does not exist");
    if (ed.tail == ed.head) throw ParseError(path + ": tail equals head");
    if (ed.left == ed.right) throw ParseError(path + ": left equals right");
    c.edges.push_back(ed);
  }
  return c;
}

inline Cluster from_json_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw ParseError("malformed JSON at " + detail::line_column(text, err.byte) + ": " + err.what());
  }
  return cluster_from_json(doc);
}

inline Cluster load_cluster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return from_json_text(buf.str());
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot write file");
  out << text;
}

// ---------------------------------------------------------------------------
// Reports

inline Json vector_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

inline Json report_json(const Classification& c) {
  return {{"verdict", to_string(c.verdict)},
          {"angle_sup", c.residuals.angle_sup},
          {"cocycle_sup", c.residuals.cocycle_sup},
          {"angle_l2", c.residuals.angle_l2},
          {"cocycle_l2", c.residuals.cocycle_l2},
          {"length_scale", c.residuals.length_scale},
          {"concurrency_ok", c.concurrency_ok},
          {"notes", c.notes}};
}

inline Json report_json(const PressureVector& p) {
  return {{"pressures", vector_json(p.values)}, {"defect", p.defect}, {"relative_defect", p.relative_defect()}};
}

inline Json report_json(const TangentReport& t) {
  return {{"nullity", t.nullity},
          {"rank", t.rank()},
          {"gap_ratio", t.gap_ratio},
          {"ambiguous", t.ambiguous},
          {"rows", t.rows},
          {"cols", t.cols},
          {"singular_values", t.singular_values}};
}

inline Json report_json(const HessianReport& h) {
  return {{"classification", h.describe()},
          {"zero_mode_count", h.zero_mode_count},
          {"negative_count", h.negative_count},
          {"m", h.m},
          {"threshold", h.threshold},
          {"ambiguous", h.ambiguous},
          {"gradient_norm", h.gradient_norm},
          {"eigenvalues", h.eigenvalues},
          {"refined_eigenvalues", h.refined_eigenvalues}};
}

inline Json report_json(const CorrespondenceReport& r) {
  Json junctions = Json::array();
  for (const auto& j : r.junctions)
    junctions.push_back({{"vertex", j.vertex},
                         {"collinearity", j.collinearity},
                         {"forms", std::vector<double>(j.forms.begin(), j.forms.end())},
                         {"spacing", j.spacing},
                         {"pass", j.pass}});
  Json edges = Json::array();
  for (const auto& e : r.edges) edges.push_back({{"edge", e.edge}, {"antipodality", e.antipodality}, {"pass", e.pass}});
  return {{"pass", r.pass},
          {"reference_form", r.reference},
          {"max_collinearity", r.max_collinearity},
          {"max_spacing", r.max_spacing},
          {"max_antipodality", r.max_antipodality},
          {"notes", r.notes},
          {"junctions", std::move(junctions)},
          {"edges", std::move(edges)}};
}

}  // namespace foamlab
