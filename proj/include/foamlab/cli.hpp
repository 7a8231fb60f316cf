#pragma once

// Command-line front end. Each verb is a thin adapter over one library call.
// Exit codes: 0 success, 1 negative verdict, 2 input or parse error,
// 3 solver non-convergence.

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "foamlab/codec.hpp"
#include "foamlab/constructions.hpp"
#include "foamlab/desitter.hpp"
#include "foamlab/equilibrium.hpp"
#include "foamlab/svg.hpp"
#include "foamlab/variation.hpp"

namespace foamlab::cli {

enum ExitCode { kOk = 0, kNegative = 1, kInputError = 2, kNonConvergence = 3 };

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
  return s;
}

inline std::string join(const Eigen::VectorXd& v) { return join(std::vector<double>(v.data(), v.data() + v.size())); }

// Writes a cluster to `path`, or to `out` when no path is given.
inline void emit_cluster(const Cluster& c, const std::string& path, std::ostream& out) {
  if (path.empty()) out << to_json_text(c);
  else save_text(path, to_json_text(c));
}

inline void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) out << text;
  else save_text(path, text);
}

inline AreaVector area_vector(const std::vector<double>& v) {
  AreaVector a(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) a[static_cast<Eigen::Index>(i)] = v[i];
  return a;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"foamlab: planar bubble clusters"};
  app.require_subcommand(1);
  std::string profile = "default";
  std::optional<std::uint64_t> seed;
  bool as_json = false;
  app.add_option("--tol-profile", profile, "Tolerance profile")->check(CLI::IsMember({"strict", "default", "loose"}));
  app.add_option("--seed", seed, "Seed for randomized steps");
  app.add_flag("--json", as_json, "Print reports as JSON");

  std::string input, output;
  auto input_opt = [&](CLI::App* sub) { sub->add_option("input", input, "Cluster JSON file")->required(); };
  auto output_opt = [&](CLI::App* sub) { sub->add_option("-o,--output", output, "Output file (default stdout)"); };

  // new
  auto* cmd_new = app.add_subcommand("new", "Build a preset cluster");
  std::string kind;
  cmd_new->add_option("kind", kind, "Preset name")->required();
  std::map<std::string, double> preset_values;
  const std::vector<std::string> preset_keys{"r1",    "r2",      "area",  "t",    "k",     "skew",
                                             "R",     "alpha1",  "alpha2", "delta", "stretch", "r_up",
                                             "r_down", "center_pressure"};
  std::map<std::string, CLI::Option*> preset_opts;
  for (const auto& key : preset_keys) preset_opts[key] = cmd_new->add_option("--" + key, preset_values[key]);
  output_opt(cmd_new);

  // check
  auto* cmd_check = app.add_subcommand("check", "Validate and classify");
  bool check_disjoint = false;
  input_opt(cmd_check);
  cmd_check->add_flag("--disjoint", check_disjoint, "Also test that arcs are disjoint");

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "Solve for an equilibrium with prescribed areas");
  std::vector<double> areas;
  std::vector<std::string> solver_settings;
  std::string solver_config;
  input_opt(cmd_solve);
  output_opt(cmd_solve);
  cmd_solve->add_option("--areas", areas, "Target areas (default: current areas)")->delimiter(',');
  cmd_solve->add_option("--set", solver_settings, "Solver setting key=value");
  cmd_solve->add_option("--config", solver_config, "Solver settings file (key = value lines)");

  // pressures
  auto* cmd_pressures = app.add_subcommand("pressures", "Region pressures");
  input_opt(cmd_pressures);

  // dim
  auto* cmd_dim = app.add_subcommand("dim", "Tangent dimension of the equilibrium variety");
  bool fix_areas = false;
  input_opt(cmd_dim);
  cmd_dim->add_flag("--fix-areas", fix_areas, "Hold the areas fixed");

  // stability
  auto* cmd_stab = app.add_subcommand("stability", "Second-variation stability");
  int m = 32;
  bool no_refine = false;
  input_opt(cmd_stab);
  cmd_stab->add_option("-m,--points", m, "Points per edge")->check(CLI::Range(8, 4096));
  cmd_stab->add_flag("--no-refine", no_refine, "Skip the 2m refinement");

  // mobius
  auto* cmd_mob = app.add_subcommand("mobius", "Apply a Moebius map");
  std::vector<double> coeffs;
  bool random_map = false;
  input_opt(cmd_mob);
  output_opt(cmd_mob);
  cmd_mob->add_option("--map", coeffs, "a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im")->delimiter(',')->expected(8);
  cmd_mob->add_flag("--random", random_map, "Random map with the pole in the exterior (needs --seed)");

  // decorate
  auto* cmd_dec = app.add_subcommand("decorate", "Insert a three-sided bubble at a vertex");
  int vertex = 0;
  double size = 0.1;
  input_opt(cmd_dec);
  output_opt(cmd_dec);
  cmd_dec->add_option("--vertex", vertex, "Vertex id")->required();
  cmd_dec->add_option("--t", size, "Size parameter");

  // shrink
  auto* cmd_shrink = app.add_subcommand("shrink", "Scale a three-sided bubble (factor 0 removes it)");
  int region = 0;
  double factor = 0.0;
  input_opt(cmd_shrink);
  output_opt(cmd_shrink);
  cmd_shrink->add_option("--region", region, "Region id")->required();
  cmd_shrink->add_option("--factor", factor, "Scale factor");

  // desitter
  auto* cmd_ds = app.add_subcommand("desitter", "de Sitter correspondence");
  std::string ds_action;
  cmd_ds->add_option("action", ds_action, "verify | triples")->required()->check(CLI::IsMember({"verify", "triples"}));
  input_opt(cmd_ds);

  // render
  auto* cmd_render = app.add_subcommand("render", "SVG rendering");
  bool fill = false;
  input_opt(cmd_render);
  output_opt(cmd_render);
  cmd_render->add_flag("--fill", fill, "Fill regions by pressure");

  // continue
  auto* cmd_cont = app.add_subcommand("continue", "Follow the equilibrium family to new areas");
  int steps = 10;
  input_opt(cmd_cont);
  output_opt(cmd_cont);
  cmd_cont->add_option("--areas", areas, "Target areas")->delimiter(',')->required();
  cmd_cont->add_option("--steps", steps, "Number of steps")->check(CLI::Range(1, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const TolerancePolicy tol = TolerancePolicy::from_profile(profile);
    auto sub = app.get_subcommands().front();

    if (sub == cmd_new) {
      std::map<std::string, double> params;
      for (const auto& key : preset_keys)
        if (preset_opts[key]->count() > 0) params[key] = preset_values[key];
      const Cluster c = make_preset(kind, params);
      detail::emit_cluster(c, output, out);
      return kOk;
    }

    const Cluster c = load_cluster(input);

    if (sub == cmd_check) {
      ValidateOptions vo;
      vo.check_disjoint = check_disjoint;
      const ValidationReport vr = validate(c, vo);
      if (!vr.ok) {
        if (as_json) out << Json{{"valid", false}, {"failures", vr.failures}}.dump(2) << "\n";
        else {
          out << "verdict: Invalid\n";
          for (const auto& f : vr.failures) out << "  " << f << "\n";
        }
        return kNegative;
      }
      const Classification cl = classify(c, tol);
      if (as_json) {
        Json j = report_json(cl);
        j["valid"] = true;
        out << j.dump(2) << "\n";
      } else {
        out << "verdict: " << to_string(cl.verdict) << "\n"
            << "angle residual: " << detail::num(cl.residuals.angle_sup) << "\n"
            << "cocycle residual: " << detail::num(cl.residuals.cocycle_sup) << "\n";
        for (const auto& n : cl.notes) out << "note: " << n << "\n";
      }
      return cl.verdict == Verdict::Equilibrium ? kOk : kNegative;
    }

    if (sub == cmd_solve) {
      SolveOptions so;
      so.policy = tol;
      if (!solver_config.empty()) {
        std::ifstream in(solver_config);
        if (!in) throw ParseError(solver_config + ": cannot open file");
        std::stringstream buf;
        buf << in.rdbuf();
        so = SolveOptions::from_config(buf.str());
        so.policy = tol;
      }
      for (const auto& kv : solver_settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw DomainError("--set expects key=value, got '" + kv + "'");
        so.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      const AreaVector target = areas.empty() ? region_areas(c) : detail::area_vector(areas);
      SolveStats stats;
      const Cluster solved = solve(c, target, so, &stats);
      detail::emit_cluster(solved, output, out);
      if (!output.empty()) out << "iterations: " << stats.iterations << "\n";
      return kOk;
    }

    if (sub == cmd_pressures) {
      const PressureVector p = pressures(c, tol);
      if (as_json) out << report_json(p).dump(2) << "\n";
      else out << "pressures: " << detail::join(p.values) << "\n";
      return kOk;
    }

    if (sub == cmd_dim) {
      const TangentReport t = tangent_dimension(c, fix_areas, tol);
      if (as_json) out << report_json(t).dump(2) << "\n";
      else
        out << "nullity " << t.nullity << "\n"
            << "gap ratio: " << detail::num(t.gap_ratio) << (t.ambiguous ? " (ambiguous)" : "") << "\n";
      return kOk;
    }

    if (sub == cmd_stab) {
      const HessianReport h = stability_report(c, m, tol, !no_refine);
      if (as_json) out << report_json(h).dump(2) << "\n";
      else {
        out << "classification: " << h.describe() << (h.ambiguous ? " (ambiguous)" : "") << "\n";
        std::vector<double> low(h.eigenvalues.begin(),
                                h.eigenvalues.begin() + std::min<std::size_t>(6, h.eigenvalues.size()));
        out << "lowest eigenvalues: " << detail::join(low) << "\n";
      }
      return h.classification == StabilityClass::Unstable ? kNegative : kOk;
    }

    if (sub == cmd_mob) {
      MobiusMap map;
      if (random_map) {
        if (!seed) throw DomainError("mobius --random needs --seed");
        std::mt19937_64 rng(*seed);
        map = random_mobius(c, rng);
      } else if (coeffs.size() == 8) {
        map = {{coeffs[0], coeffs[1]}, {coeffs[2], coeffs[3]}, {coeffs[4], coeffs[5]}, {coeffs[6], coeffs[7]}};
      } else {
        throw DomainError("mobius needs --map or --random");
      }
      detail::emit_cluster(mobius_apply_cluster(map, c), output, out);
      return kOk;
    }

    if (sub == cmd_dec) {
      detail::emit_cluster(decorate(c, vertex, size), output, out);
      return kOk;
    }

    if (sub == cmd_shrink) {
      detail::emit_cluster(scale_three_sided(c, region, factor), output, out);
      return kOk;
    }

    if (sub == cmd_ds) {
      if (ds_action == "triples") {
        Json arr = Json::array();
        for (const auto& jt : junction_triples(c)) {
          Json pts = Json::array();
          for (const auto& p : jt.points) pts.push_back({p.t, p.x, p.y, p.z});
          arr.push_back({{"vertex", jt.vertex}, {"points", std::move(pts)}});
        }
        out << arr.dump(2) << "\n";
        return kOk;
      }
      const CorrespondenceReport r = verify_correspondence(c);
      if (as_json) out << report_json(r).dump(2) << "\n";
      else {
        out << "correspondence: " << (r.pass ? "pass" : "fail") << "\n"
            << "collinearity: " << detail::num(r.max_collinearity) << "\n"
            << "spacing: " << detail::num(r.max_spacing) << "\n"
            << "antipodality: " << detail::num(r.max_antipodality) << "\n";
        for (const auto& n : r.notes) out << "note: " << n << "\n";
      }
      return r.pass ? kOk : kNegative;
    }

    if (sub == cmd_render) {
      SvgStyle style;
      style.fill_by_pressure = fill;
      detail::emit_text(to_svg(c, style), output, out);
      return kOk;
    }

    if (sub == cmd_cont) {
      const AreaVector target = detail::area_vector(areas);
      SolveOptions so;
      so.policy = tol;
      const auto path = continue_family(c, target, steps, so);
      detail::emit_cluster(path.back(), output, out);
      if (!output.empty())
        out << "steps: " << steps << "\n"
            << "final area error: " << detail::num((region_areas(path.back()) - target).cwiseAbs().maxCoeff())
            << "\n";
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PathInconsistent& e) {
    err << "negative: " << e.what() << "\n";
    return kNegative;
  } catch (const NotConcurrent& e) {
    err << "negative: " << e.what() << "\n";
    return kNegative;
  } catch (const Error& e) {
    // NonConvergence, TopologyBreakdown, ContinuationFailure
    err << "failed: " << e.what() << "\n";
    return kNonConvergence;
  }
  return kInputError;
}

}  // namespace foamlab::cli
