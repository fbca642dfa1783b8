#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "pentamotion/common.hpp"
#include "pentamotion/geometry.hpp"
#include "pentamotion/selfmotion.hpp"

namespace pentamotion {

// ---------------------------------------------------------------------------
// Basic-surface generators and sampling
// ---------------------------------------------------------------------------

/// One ruling of the basic surface: the Pluecker line of a line-symmetric
/// pose together with its pedal point G = f x e w.r.t. the fixed origin.
struct Generator {
  PluckerLine line;
  Vec3 pedal;
  double sweep_param = 0;
};

inline std::vector<Generator> generators(const TracedMotion& tm) {
  std::vector<Generator> out;
  out.reserve(tm.poses.size());
  for (size_t i = 0; i < tm.poses.size(); ++i) {
    Generator g;
    g.line = plucker_from_pose(tm.poses[i]);
    g.pedal = g.line.pedal();
    g.sweep_param = static_cast<double>(i);
    out.push_back(g);
  }
  return out;
}

inline std::vector<Generator> generators(const DesignParams& d,
                                         const Direction& h, int count) {
  return generators(trace_motion(d, h, count));
}

/// Grid of surface points G + gamma * e over the traced generators.
struct RuledPatch {
  std::vector<Generator> gens;
  std::vector<double> gammas;
  std::vector<std::vector<Vec3>> points;  // [generator][gamma]
};

inline RuledPatch sample_basic_surface(const TracedMotion& tm,
                                       double gamma_lo = -10,
                                       double gamma_hi = 10,
                                       int n_gamma = 20) {
  require(n_gamma >= 2 && gamma_hi > gamma_lo, Errc::precondition,
          "invalid gamma sampling");
  RuledPatch patch;
  patch.gens = generators(tm);
  patch.gammas.resize(n_gamma);
  for (int j = 0; j < n_gamma; ++j) {
    patch.gammas[j] = gamma_lo + (gamma_hi - gamma_lo) * j / (n_gamma - 1);
  }
  patch.points.resize(patch.gens.size());
  for (size_t i = 0; i < patch.gens.size(); ++i) {
    const Generator& g = patch.gens[i];
    patch.points[i].reserve(n_gamma);
    for (double gamma : patch.gammas) {
      patch.points[i].push_back(g.pedal + gamma * g.line.direction);
    }
  }
  return patch;
}

inline RuledPatch sample_basic_surface(const DesignParams& d,
                                       const Direction& h, int n_gen,
                                       double gamma_lo, double gamma_hi,
                                       int n_gamma) {
  return sample_basic_surface(trace_motion(d, h, n_gen), gamma_lo, gamma_hi,
                              n_gamma);
}

// ---------------------------------------------------------------------------
// Reference example and its implicit quintic
// ---------------------------------------------------------------------------

/// The worked reference configuration used as a verification oracle
/// throughout: design (A, C, a_r, a_c, a4) = (-1, -5, 7, 4, 2) with direction
/// h = (1, 3/2, 1/2), for which the basic surface has a known implicit
/// degree-5 equation.
inline DesignParams reference_design() { return classify(-1, -5, 7, 4, 2); }
inline Direction reference_direction() { return Direction::from_h(1, 1.5, 0.5); }

inline bool matches_reference_example(const DesignParams& d,
                                      const Direction& h) {
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  if (!(near(d.A, -1) && near(d.C, -5) && near(d.a_r, 7) && near(d.a_c, 4) &&
        near(d.a4, 2)))
    return false;
  // h proportional to (1, 3/2, 1/2)
  Vec3 a(h.h0, h.h1, h.h2), b(1, 1.5, 0.5);
  return a.cross(b).norm() <= 1e-12 * a.norm() * b.norm() && a.dot(b) != 0;
}

namespace detail {

struct QuinticTerm {
  int px, py, pz;
  double c;
};

/// Implicit equation of the reference basic surface (fixed frame).
inline const std::array<QuinticTerm, 49>& reference_quintic_terms() {
  static const std::array<QuinticTerm, 49> terms = {{
      {0, 0, 0, 46930000},    {2, 1, 2, -59658690},  {1, 0, 0, -187188000},
      {0, 0, 1, -211012100},  {0, 1, 0, -214586000}, {1, 2, 2, -100313675},
      {2, 2, 1, 51139382},    {2, 1, 1, 199127898},  {1, 1, 2, -109272380},
      {1, 2, 1, 507256879},   {1, 1, 1, 812997056},  {5, 0, 0, 18368287},
      {4, 0, 0, 156741893},   {3, 0, 0, 193802233},  {2, 0, 0, -138195885},
      {0, 2, 0, 323499460},   {0, 3, 0, -423262296}, {0, 4, 0, -191807553},
      {0, 5, 0, -20098036},   {0, 0, 2, 115381175},  {0, 0, 3, -53539850},
      {4, 1, 0, -20098036},   {3, 2, 0, 36736574},   {2, 3, 0, -40196072},
      {1, 4, 0, 18368287},    {3, 1, 0, -5063828},   {2, 2, 0, -35065660},
      {1, 3, 0, -5063828},    {2, 1, 0, 378103208},  {1, 2, 0, -582502914},
      {1, 1, 0, 195340960},   {4, 0, 1, 25569691},   {3, 0, 2, -100313675},
      {2, 0, 3, -33771290},   {3, 0, 1, 507256879},  {2, 0, 2, -176781955},
      {1, 0, 3, -84016380},   {2, 0, 1, 1163441469}, {1, 0, 2, 34883415},
      {1, 0, 1, 556424125},   {0, 1, 3, 13179040},   {0, 1, 1, 639976950},
      {0, 2, 3, -33771290},   {0, 2, 1, -28318339},  {0, 3, 1, 199127898},
      {0, 3, 2, -59658690},   {0, 4, 1, 25569691},   {0, 2, 2, 96060335},
      {0, 1, 2, -41015170},
  }};
  return terms;
}

inline double ipow(double x, int n) {
  double r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace detail

inline double reference_quintic_value(const Vec3& p) {
  double sum = 0;
  for (const auto& t : detail::reference_quintic_terms()) {
    sum += t.c * detail::ipow(p(0), t.px) * detail::ipow(p(1), t.py) *
           detail::ipow(p(2), t.pz);
  }
  return sum;
}

inline Vec3 reference_quintic_gradient(const Vec3& p) {
  Vec3 g = Vec3::Zero();
  for (const auto& t : detail::reference_quintic_terms()) {
    if (t.px > 0)
      g(0) += t.c * t.px * detail::ipow(p(0), t.px - 1) *
              detail::ipow(p(1), t.py) * detail::ipow(p(2), t.pz);
    if (t.py > 0)
      g(1) += t.c * t.py * detail::ipow(p(0), t.px) *
              detail::ipow(p(1), t.py - 1) * detail::ipow(p(2), t.pz);
    if (t.pz > 0)
      g(2) += t.c * t.pz * detail::ipow(p(0), t.px) *
              detail::ipow(p(1), t.py) * detail::ipow(p(2), t.pz - 1);
  }
  return g;
}

struct ResidualStats {
  double min = 0, mean = 0, max = 0;
  int count = 0;
};

/// Gradient-scaled residual |Q(p)| / |grad Q(p)| of the reference quintic
/// over a set of points; a first-order distance proxy that is insensitive to
/// the large coefficient scale of the implicit equation.
inline ResidualStats quintic_residual(const std::vector<Vec3>& points) {
  ResidualStats st;
  st.count = static_cast<int>(points.size());
  if (points.empty()) return st;
  st.min = std::numeric_limits<double>::infinity();
  double sum = 0;
  for (const Vec3& p : points) {
    double v = std::abs(reference_quintic_value(p));
    double g = reference_quintic_gradient(p).norm();
    double r = v / std::max(g, 1e-9);
    st.min = std::min(st.min, r);
    st.max = std::max(st.max, r);
    sum += r;
  }
  st.mean = sum / st.count;
  return st;
}

// ---------------------------------------------------------------------------
// Krames reflection construction
// ---------------------------------------------------------------------------

/// Reflection of the platform line and of the sphere-center curve in one
/// generator of the basic surface. The reflected line p_bar belongs to the
/// fixed system; the reflected curve samples P_bar belong to the moving
/// system, and their points run on spheres centered on p_bar throughout the
/// self-motion. The construction degenerates to a previously known special
/// case when h1 = h2 = 0 or h0 = 0 (flagged, not an error).
struct ReflectedConfig {
  Generator generator;
  PluckerLine p_bar;
  std::vector<double> ts;
  std::vector<Vec3> P_bar_samples;
  bool borel_special = false;
};

inline ReflectedConfig krames_reflect(const TracedMotion& tm, int pose_index,
                                      const std::vector<double>& t_samples) {
  require(pose_index >= 0 &&
              pose_index < static_cast<int>(tm.poses.size()),
          Errc::precondition, "pose index out of range");
  ReflectedConfig rc;
  rc.generator.line = plucker_from_pose(tm.poses[pose_index]);
  rc.generator.pedal = rc.generator.line.pedal();
  rc.generator.sweep_param = pose_index;

  // Fixed-space position of the platform line at this pose, reflected in g.
  Displacement disp = displacement_from_pose(tm.poses[pose_index]);
  const Vec3& n = tm.frame.n;
  const Vec3& d = tm.frame.d;
  Vec3 q0 = reflect_in_line(rc.generator.line, disp.apply<double>(n));
  Vec3 q1 = reflect_in_line(rc.generator.line,
                            disp.apply<double>(Vec3(n + d)));
  rc.p_bar = PluckerLine::from_points(q0, q1);

  rc.ts = t_samples;
  rc.P_bar_samples.reserve(t_samples.size());
  for (double t : t_samples) {
    rc.P_bar_samples.push_back(
        reflect_in_line(rc.generator.line, sigma_P(tm.design, t)));
  }

  const Direction& h = tm.frame.h;
  double hn = std::sqrt(h.sum_sq());
  rc.borel_special = (std::abs(h.h0) <= 1e-12 * hn) ||
                     (std::abs(h.h1) <= 1e-12 * hn &&
                      std::abs(h.h2) <= 1e-12 * hn);
  return rc;
}

}  // namespace pentamotion
