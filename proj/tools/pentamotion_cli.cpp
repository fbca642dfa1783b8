// pentamotion: command-line front end for the pentapod self-motion toolkit.
//
//   pentamotion <classify|trace|surface|reality|workspace|krames|verify>
//               --config <file.json> [--out <dir>] [--tol <x>]
//
// Exit codes: 0 success, 1 configuration/validation error, 2 numeric failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pentamotion/pentamotion.hpp"

using json = nlohmann::ordered_json;
using namespace pentamotion;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  DesignParams design;
  std::optional<Direction> h;
  std::optional<double> p5;
  std::optional<double> R1;
  std::optional<double> t;
  std::optional<std::pair<double, double>> leg_range;
  int count = 200;
  double gamma_lo = -10, gamma_hi = 10;
  int n_gamma = 20;
  int grid = 10;
  int pose_index = 0;
  std::vector<double> t_samples;
  std::vector<Vec3> scan_points;
  json raw;
};

[[noreturn]] void config_error(const std::string& msg) {
  std::fprintf(stderr, "config error: %s\n", msg.c_str());
  std::exit(1);
}

double num(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    config_error("missing or non-numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }

  static const std::vector<std::string> known = {
      "design", "h", "p5", "R1", "t", "leg_range", "sampling",
      "pose_index", "t_samples", "scan_points", "tolerance"};
  for (auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error("unknown field '" + key + "'");
    }
  }

  RunConfig cfg;
  cfg.raw = j;
  if (!j.contains("design") || !j["design"].is_object()) {
    config_error("missing 'design' object");
  }
  const json& d = j["design"];
  try {
    cfg.design = classify(num(d, "A"), num(d, "C"), num(d, "a_r"),
                          num(d, "a_c"), num(d, "a4"));
  } catch (const Error& e) {
    config_error(e.what());
  }
  if (j.contains("h")) {
    if (!j["h"].is_array() || j["h"].size() != 3) config_error("'h' must be [h0,h1,h2]");
    try {
      cfg.h = Direction::from_h(j["h"][0].get<double>(), j["h"][1].get<double>(),
                                j["h"][2].get<double>());
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (j.contains("p5")) cfg.p5 = num(j, "p5");
  if (j.contains("R1")) cfg.R1 = num(j, "R1");
  if (j.contains("t")) cfg.t = num(j, "t");
  if (j.contains("leg_range")) {
    if (!j["leg_range"].is_array() || j["leg_range"].size() != 2) {
      config_error("'leg_range' must be [Lmin, Lmax]");
    }
    cfg.leg_range = {j["leg_range"][0].get<double>(), j["leg_range"][1].get<double>()};
  }
  if (j.contains("sampling")) {
    const json& s = j["sampling"];
    if (s.contains("count")) cfg.count = s["count"].get<int>();
    if (s.contains("grid")) cfg.grid = s["grid"].get<int>();
    if (s.contains("gamma_range")) {
      cfg.gamma_lo = s["gamma_range"][0].get<double>();
      cfg.gamma_hi = s["gamma_range"][1].get<double>();
    }
    if (s.contains("n_gamma")) cfg.n_gamma = s["n_gamma"].get<int>();
  }
  if (cfg.count < 2 || cfg.count > 100000) config_error("'sampling.count' out of range");
  if (cfg.grid < 2 || cfg.grid > 200) config_error("'sampling.grid' out of range");
  if (j.contains("pose_index")) cfg.pose_index = j["pose_index"].get<int>();
  if (j.contains("t_samples")) {
    for (const auto& v : j["t_samples"]) cfg.t_samples.push_back(v.get<double>());
  }
  if (j.contains("scan_points")) {
    for (const auto& p : j["scan_points"]) {
      if (!p.is_array() || p.size() != 3) config_error("scan point must be [x,y,z]");
      cfg.scan_points.emplace_back(p[0].get<double>(), p[1].get<double>(),
                                   p[2].get<double>());
    }
  }
  if (j.contains("tolerance")) tolerances().residual = num(j, "tolerance");
  return cfg;
}

/// Resolves the motion (h, p5, R1^2) per the one-of-h-or-p5 contract; v = 0
/// designs take p5 = a_r implicitly and require h plus R1.
struct MotionSpec {
  Direction h;
  double p5 = 0;
  double r1_sq = std::numeric_limits<double>::quiet_NaN();
};

MotionSpec resolve_motion(const RunConfig& cfg) {
  MotionSpec m;
  if (cfg.design.v == 0.0) {
    if (!cfg.h) config_error("v = 0 design: 'h' is required (p5 = a_r is forced)");
    if (!cfg.R1) config_error("v = 0 design: 'R1' is required");
    if (cfg.p5 && std::abs(*cfg.p5 - cfg.design.a_r) > 1e-9) {
      config_error("v = 0 design forces p5 = a4 = a_r");
    }
    m.h = *cfg.h;
    m.p5 = cfg.design.a_r;
    m.r1_sq = (*cfg.R1) * (*cfg.R1);
    return m;
  }
  if (cfg.h && cfg.p5) config_error("give exactly one of 'h' and 'p5'");
  if (cfg.h) {
    m.h = *cfg.h;
    m.p5 = p5_from_h(cfg.design, m.h);
  } else if (cfg.p5) {
    std::vector<Direction> sols = h_from_p5(cfg.design, *cfg.p5, 1.0, 1.0);
    if (sols.empty()) {
      std::fprintf(stderr, "numeric failure: no real direction for p5 = %g "
                           "(with rho = (1,1))\n", *cfg.p5);
      std::exit(2);
    }
    m.h = sols.front();
    m.p5 = *cfg.p5;
  } else {
    config_error("one of 'h' or 'p5' is required to fix the motion");
  }
  m.r1_sq = r1_sq_from_p5(cfg.design, m.p5);
  return m;
}

TracedMotion traced(const RunConfig& cfg, const MotionSpec& m) {
  if (cfg.design.v == 0.0) {
    return trace_motion_special_v0(cfg.design, m.h, m.p5, m.r1_sq, cfg.count);
  }
  return trace_motion(cfg.design, m.h, cfg.count);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json config_echo(const RunConfig& cfg) {
  json e;
  e["version"] = kVersion;
  e["config"] = cfg.raw;
  e["tolerance"] = tolerances().residual;
  return e;
}

json motion_echo(const MotionSpec& m) {
  json e;
  e["h"] = {m.h.h0, m.h.h1, m.h.h2};
  e["p5"] = m.p5;
  e["r1_sq"] = m.r1_sq;
  return e;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) config_error("cannot write " + p.string());
  out << body;
  std::printf("wrote %s\n", p.string().c_str());
}

void write_json(const fs::path& p, const json& j) {
  write_text(p, j.dump(2) + "\n");
}

json report_json(const ResidualReport& rep) {
  json r;
  r["pose_count"] = rep.pose_count;
  r["max_quadric"] = rep.max_quadric;
  r["max_e0"] = rep.max_e0;
  r["max_f0"] = rep.max_f0;
  r["max_omega2"] = rep.max_omega2;
  r["max_omega3"] = rep.max_omega3;
  r["max_omega4"] = rep.max_omega4;
  r["max_pi5"] = rep.max_pi5;
  r["max_leg_drift"] = rep.max_leg_drift;
  r["leg1_vs_r1"] = rep.leg1_vs_r1;
  r["baseline_legs"] = rep.baseline_legs;
  r["empty"] = rep.empty;
  r["pass"] = rep.pass;
  return r;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_classify(const RunConfig& cfg, const fs::path& out) {
  json rep = config_echo(cfg);
  rep["ptype"] = type_name(cfg.design.ptype);
  rep["v"] = cfg.design.v;
  rep["w"] = cfg.design.w;
  LegParams lp = leg_params(cfg.design);
  rep["p2"] = {lp.p2.real(), lp.p2.imag()};
  rep["p3"] = {lp.p3.real(), lp.p3.imag()};
  rep["p4"] = lp.p4;
  if (cfg.design.v == 0.0) {
    rep["v0_special_case"] = true;
    rep["forced_p5"] = cfg.design.a_r;
  } else if (cfg.p5) {
    double r1_sq = r1_sq_from_p5(cfg.design, *cfg.p5);
    rep["p5"] = *cfg.p5;
    rep["r1_sq"] = r1_sq;
    if (r1_sq >= 0) rep["R1"] = std::sqrt(r1_sq);
  } else if (cfg.R1) {
    rep["R1"] = *cfg.R1;
    rep["p5"] = p5_from_r1_sq(cfg.design, (*cfg.R1) * (*cfg.R1));
  }
  write_json(out / "classify.json", rep);
  return 0;
}

int cmd_trace(const RunConfig& cfg, const fs::path& out) {
  MotionSpec m = resolve_motion(cfg);
  TracedMotion tm = traced(cfg, m);

  std::string csv =
      "index,e1,e2,e3,f1,f2,f3,r11,r12,r13,r21,r22,r23,r31,r32,r33,"
      "s1,s2,s3,leg1,leg2,leg3,leg4,leg5\r\n";
  for (size_t i = 0; i < tm.poses.size(); ++i) {
    const StudyPose& p = tm.poses[i];
    Displacement d = displacement_from_pose(p);
    std::array<double, 5> legs =
        leg_lengths(tm.design, tm.legs, tm.frame.n, tm.frame.d, p);
    csv += std::to_string(i);
    for (double v : {p.e1, p.e2, p.e3, p.f1, p.f2, p.f3}) csv += "," + fmt(v);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) csv += "," + fmt(d.R(r, c));
    for (int k = 0; k < 3; ++k) csv += "," + fmt(d.s(k));
    for (double v : legs) csv += "," + fmt(v);
    csv += "\r\n";
  }
  write_text(out / "trace.csv", csv);

  ResidualReport rr = motion_residual_report(tm);
  json rep = config_echo(cfg);
  rep["motion"] = motion_echo(m);
  rep["residuals"] = report_json(rr);
  write_json(out / "trace_residuals.json", rep);
  return rr.pass ? 0 : 2;
}

int cmd_surface(const RunConfig& cfg, const fs::path& out) {
  MotionSpec m = resolve_motion(cfg);
  TracedMotion tm = traced(cfg, m);
  RuledPatch patch = sample_basic_surface(tm, cfg.gamma_lo, cfg.gamma_hi,
                                          cfg.n_gamma);

  std::string obj = "# pentamotion basic-surface patch\n";
  const int ng = static_cast<int>(patch.gammas.size());
  for (const auto& row : patch.points) {
    for (const Vec3& p : row) {
      obj += "v " + fmt(p(0)) + " " + fmt(p(1)) + " " + fmt(p(2)) + "\n";
    }
  }
  for (int i = 0; i + 1 < static_cast<int>(patch.points.size()); ++i) {
    for (int j = 0; j + 1 < ng; ++j) {
      int a = i * ng + j + 1;
      int b = (i + 1) * ng + j + 1;
      obj += "f " + std::to_string(a) + " " + std::to_string(b) + " " +
             std::to_string(b + 1) + " " + std::to_string(a + 1) + "\n";
    }
  }
  write_text(out / "surface.obj", obj);

  std::string csv = "index,sweep_param,ex,ey,ez,mx,my,mz,px,py,pz\r\n";
  for (size_t i = 0; i < patch.gens.size(); ++i) {
    const Generator& g = patch.gens[i];
    csv += std::to_string(i) + "," + fmt(g.sweep_param);
    for (int k = 0; k < 3; ++k) csv += "," + fmt(g.line.direction(k));
    for (int k = 0; k < 3; ++k) csv += "," + fmt(g.line.moment(k));
    for (int k = 0; k < 3; ++k) csv += "," + fmt(g.pedal(k));
    csv += "\r\n";
  }
  write_text(out / "generators.csv", csv);

  json rep = config_echo(cfg);
  rep["motion"] = motion_echo(m);
  rep["generators"] = patch.gens.size();
  rep["gamma_samples"] = patch.gammas.size();
  write_json(out / "surface.json", rep);

  if (matches_reference_example(cfg.design, m.h)) {
    std::vector<Vec3> pts;
    for (const auto& row : patch.points)
      for (const Vec3& p : row) pts.push_back(p);
    ResidualStats st = quintic_residual(pts);
    json qrep = config_echo(cfg);
    qrep["motion"] = motion_echo(m);
    qrep["quintic_residual"] = {{"count", st.count},
                                {"min", st.min},
                                {"mean", st.mean},
                                {"max", st.max}};
    write_json(out / "quintic_residuals.json", qrep);
  }
  return 0;
}

int cmd_reality(const RunConfig& cfg, const fs::path& out) {
  double t = cfg.t.value_or(0.0);
  RealityDetail det = reality_detail(cfg.design, t);
  json rep = config_echo(cfg);
  rep["t"] = t;
  rep["degenerate"] = det.interval.degenerate;
  rep["interval"] = {det.interval.lower, det.interval.upper};
  if (!det.interval.degenerate) {
    rep["xi_t"] = det.xi_t;
    rep["zeta_t"] = det.zeta_t;
    json feet = json::array();
    for (size_t i = 0; i < det.pedal.points.size(); ++i) {
      feet.push_back({{"xi", det.pedal.points[i](0)},
                      {"zeta", det.pedal.points[i](1)},
                      {"distance", det.pedal.distances[i]}});
    }
    rep["pedal_points"] = feet;
  }
  write_json(out / "reality.json", rep);
  return 0;
}

int cmd_workspace(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.leg_range) config_error("'leg_range' is required for workspace");
  double t = cfg.t.value_or(0.0);
  RealityInterval iv = reality_interval(cfg.design, t);
  bool free = workspace_free(cfg.design, t, cfg.leg_range->first,
                             cfg.leg_range->second);
  json rep = config_echo(cfg);
  rep["t"] = t;
  rep["leg_range"] = {cfg.leg_range->first, cfg.leg_range->second};
  rep["interval"] = {iv.lower, iv.upper};
  rep["degenerate"] = iv.degenerate;
  rep["free"] = free;
  write_json(out / "workspace.json", rep);
  return 0;
}

int cmd_krames(const RunConfig& cfg, const fs::path& out) {
  MotionSpec m = resolve_motion(cfg);
  TracedMotion tm = traced(cfg, m);
  std::vector<double> ts = cfg.t_samples;
  if (ts.empty()) ts = {-3, -1, 0, 1, 2.5, 69.0 / 20, 5, 6.1, 8, 10};
  int idx = cfg.pose_index;
  if (idx < 0 || idx >= static_cast<int>(tm.poses.size())) {
    config_error("'pose_index' out of range");
  }
  ReflectedConfig rc = krames_reflect(tm, idx, ts);

  std::string csv = "record,t,x,y,z,radius,rms,dist_to_pbar\r\n";
  Vec3 pb0 = rc.p_bar.pedal();
  Vec3 pb1 = pb0 + rc.p_bar.direction;
  csv += "pbar_point,0," + fmt(pb0(0)) + "," + fmt(pb0(1)) + "," + fmt(pb0(2)) + ",,,\r\n";
  csv += "pbar_point,1," + fmt(pb1(0)) + "," + fmt(pb1(1)) + "," + fmt(pb1(2)) + ",,,\r\n";
  for (size_t i = 0; i < ts.size(); ++i) {
    const Vec3& s = rc.P_bar_samples[i];
    csv += "pbar_sample," + fmt(ts[i]) + "," + fmt(s(0)) + "," + fmt(s(1)) +
           "," + fmt(s(2)) + ",,,\r\n";
  }
  double max_rms = 0, max_line_dist = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    Vec3 moving = sigma_P(tm.design, ts[i]);
    std::vector<Vec3> traj;
    for (const StudyPose& p : tm.poses) {
      traj.push_back(displacement_from_pose(p).apply<double>(moving));
    }
    SphereFit<double> fit = fit_sphere(traj);
    double radius = fit.radius_sq >= 0 ? std::sqrt(fit.radius_sq) : -1.0;
    max_rms = std::max(max_rms, fit.rms_residual);
    max_line_dist = std::max(max_line_dist, rc.p_bar.distance_to(fit.center));
    csv += "sphere," + fmt(ts[i]) + "," + fmt(fit.center(0)) + "," +
           fmt(fit.center(1)) + "," + fmt(fit.center(2)) + "," + fmt(radius) +
           "," + fmt(fit.rms_residual) + "," +
           fmt(rc.p_bar.distance_to(fit.center)) + "\r\n";
  }
  if (rc.borel_special) {
    csv += "note,borel_special_case,,,,,,\r\n";
  }
  write_text(out / "krames.csv", csv);

  json rep = config_echo(cfg);
  rep["motion"] = motion_echo(m);
  rep["pose_index"] = idx;
  rep["borel_special"] = rc.borel_special;
  rep["max_sphere_rms"] = max_rms;
  rep["max_center_line_dist"] = max_line_dist;
  write_json(out / "krames.json", rep);
  return 0;
}

int cmd_verify(const RunConfig& cfg, const fs::path& out) {
  MotionSpec m = resolve_motion(cfg);
  TracedMotion tm = traced(cfg, m);
  json rep = config_echo(cfg);
  rep["motion"] = motion_echo(m);
  ResidualReport rr = motion_residual_report(tm);
  rep["motion_residuals"] = report_json(rr);
  bool ok = rr.pass;

  // Ellipsoid membership statistics on a grid of directions.
  {
    std::vector<double> ts = {0.0, cfg.design.a4};
    CenterPoint cp = center_point(cfg.design);
    if (!cp.infinite) ts.push_back(cp.c);
    if (cfg.t) ts.push_back(*cfg.t);
    json stats = json::array();
    for (double t : ts) {
      Ellipsoid el = ellipsoid_for(cfg.design, t);
      double worst = 0;
      int n = 0;
      for (int i = 0; i < cfg.grid; ++i) {
        for (int j = 0; j < cfg.grid; ++j) {
          double h1 = -2 + 4.0 * i / (cfg.grid - 1);
          double h2 = -2 + 4.0 * j / (cfg.grid - 1);
          if (h1 == 0 && h2 == 0) continue;
          Vec3 img = locus_point(cfg.design, Direction::from_h(1, h1, h2), t);
          worst = std::max(worst, std::abs(el.implicit_residual(img)));
          ++n;
        }
      }
      stats.push_back({{"t", t},
                       {"degenerate_disc", el.degenerate_disc},
                       {"grid_points", n},
                       {"max_residual", worst}});
      ok = ok && worst <= 1e-7;
    }
    rep["ellipsoid_membership"] = stats;
  }

  if (matches_reference_example(cfg.design, m.h)) {
    RuledPatch patch = sample_basic_surface(tm, cfg.gamma_lo, cfg.gamma_hi,
                                            cfg.n_gamma);
    std::vector<Vec3> pts;
    for (const auto& row : patch.points)
      for (const Vec3& p : row) pts.push_back(p);
    ResidualStats st = quintic_residual(pts);
    rep["quintic_residual"] = {{"count", st.count},
                               {"min", st.min},
                               {"mean", st.mean},
                               {"max", st.max}};
    ok = ok && st.max <= 1e-6;

    IsotropicCubicsReport ic = isotropic_cubics_check(
        std::min(cfg.count, 64), 8);
    rep["isotropic_cubics"] = {
        {"points_per_plane", ic.points_per_plane},
        {"max_curve_rms", ic.max_curve_rms},
        {"max_line_center_err", ic.max_line_center_err},
        {"min_offcurve_rms", ic.min_offcurve_rms}};
    ok = ok && ic.max_curve_rms <= 1e-8;
  }

  // Scan hook: sphere-fit the trajectories of user-supplied moving points.
  // No completeness claim; a small rms only reports that the sampled
  // trajectory is numerically spherical.
  if (!cfg.scan_points.empty()) {
    json scan = json::array();
    for (const Vec3& x : cfg.scan_points) {
      std::vector<Vec3> traj;
      for (const StudyPose& p : tm.poses) {
        traj.push_back(displacement_from_pose(p).apply<double>(x));
      }
      SphereFit<double> fit = fit_sphere(traj);
      scan.push_back({{"point", {x(0), x(1), x(2)}},
                      {"center", {fit.center(0), fit.center(1), fit.center(2)}},
                      {"radius_sq", fit.radius_sq},
                      {"rms", fit.rms_residual},
                      {"degenerate", fit.degenerate}});
    }
    rep["scan"] = scan;
  }

  rep["pass"] = ok;
  write_json(out / "verify.json", rep);
  return ok ? 0 : 2;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::invalid_design:
    case Errc::unsupported_type:
    case Errc::all_zero:
    case Errc::ideal_point:
    case Errc::precondition:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pentapod self-motion toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  double tol_flag = -1;

  std::vector<std::string> names = {"classify", "trace",  "surface", "reality",
                                    "workspace", "krames", "verify"};
  for (const std::string& n : names) {
    CLI::App* sub = app.add_subcommand(n);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--tol", tol_flag, "residual tolerance override");
  }

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();

  if (const char* env = std::getenv("PENTAMOTION_TOL")) {
    tolerances().residual = std::atof(env);
  }

  RunConfig cfg = parse_config(config_path);
  if (tol_flag > 0) tolerances().residual = tol_flag;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) config_error("cannot create output directory " + out_dir);

  try {
    if (cmd == "classify") return cmd_classify(cfg, out_dir);
    if (cmd == "trace") return cmd_trace(cfg, out_dir);
    if (cmd == "surface") return cmd_surface(cfg, out_dir);
    if (cmd == "reality") return cmd_reality(cfg, out_dir);
    if (cmd == "workspace") return cmd_workspace(cfg, out_dir);
    if (cmd == "krames") return cmd_krames(cfg, out_dir);
    if (cmd == "verify") return cmd_verify(cfg, out_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
