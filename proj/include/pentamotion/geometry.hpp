#pragma once

#include <cmath>
#include <limits>

#include "pentamotion/common.hpp"
#include "pentamotion/design.hpp"
#include "pentamotion/selfmotion.hpp"

namespace pentamotion {

/// The finite sphere center corresponding to the platform point with
/// parameter t under the center correspondence:
///   P_t = ( A(a_r^2 + a_c^2 - t a_r) / ((t - a_r)^2 + a_c^2),
///          -A a_c t / ((t - a_r)^2 + a_c^2),
///           C a4 / (a4 - t) ).
/// t = +-infinity is the explicit limit mode and maps to the base anchor M5
/// at the origin. t = a4 has no finite image.
inline Vec3 sigma_P(const DesignParams& d, double t) {
  if (std::isinf(t)) return Vec3::Zero();
  double scale = 1 + std::abs(d.a4) + std::abs(t);
  require(std::abs(t - d.a4) > 1e-13 * scale, Errc::ideal_point,
          "t = a4 maps to the real ideal point of the center curve");
  double den = (t - d.a_r) * (t - d.a_r) + d.a_c * d.a_c;
  return Vec3(d.A * (d.a_r * d.a_r + d.a_c * d.a_c - t * d.a_r) / den,
              -d.A * d.a_c * t / den, d.C * d.a4 / (d.a4 - t));
}

/// Common center of the ellipsoid family: the point of the center curve at
/// t = c with c = (a4^2 - a_c^2 - a_r^2) / (2(a4 - a_r)). For a_r = a4 the
/// parameter is infinite and the center is M5 (the origin).
struct CenterPoint {
  double c = 0;
  bool infinite = false;
  Vec3 C = Vec3::Zero();
};

inline CenterPoint center_point(const DesignParams& d) {
  CenterPoint cp;
  if (d.a4 == d.a_r) {
    cp.infinite = true;
    cp.c = std::numeric_limits<double>::infinity();
    cp.C = Vec3::Zero();
    return cp;
  }
  cp.c = (d.a4 * d.a4 - d.a_c * d.a_c - d.a_r * d.a_r) / (2 * (d.a4 - d.a_r));
  cp.C = sigma_P(d, cp.c);
  return cp;
}

/// Ellipsoid of rotation with vertical axis: the locus of a platform point
/// under the family of self-motions. Vertex half-length |a4 - t|, squared
/// equator radius (a_r - t)^2 + a_c^2. For t = a4 the locus degenerates to
/// the disc in the plane z = p4 centered at the common center.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  double vertex_half_length = 0;
  double equator_radius = 1;
  bool degenerate_disc = false;

  /// Value of ((x-cx)^2 + (y-cy)^2)/k1^2 + (z-cz)^2/k2^2 - 1; for the
  /// degenerate disc the z-offset from the carrier plane.
  double implicit_residual(const Vec3& p) const {
    if (degenerate_disc) return p(2) - center(2);
    Vec3 r = p - center;
    return (r(0) * r(0) + r(1) * r(1)) / (equator_radius * equator_radius) +
           r(2) * r(2) / (vertex_half_length * vertex_half_length) - 1;
  }
};

inline Ellipsoid ellipsoid_for(const DesignParams& d, double t) {
  Ellipsoid e;
  e.center = center_point(d).C;
  e.vertex_half_length = std::abs(d.a4 - t);
  e.equator_radius = std::sqrt((d.a_r - t) * (d.a_r - t) + d.a_c * d.a_c);
  e.degenerate_disc = (t == d.a4);
  return e;
}

/// Image of the platform point p_t under the representative pose of the
/// self-motion fixed by h (the configuration with L = 0, realized by
/// e = (h2, -h1, 0)/sqrt(h1^2+h2^2)). The image lies on ellipsoid_for(d, t)
/// for every admissible h.
inline Vec3 locus_point(const DesignParams& d, const Direction& h, double t) {
  double hs = std::hypot(h.h1, h.h2);
  require(hs > 0, Errc::precondition, "locus pose requires (h1, h2) != (0, 0)");
  double p5 = p5_from_h(d, h);
  LegParams legs = leg_params(d);
  legs.p5 = p5;
  LineSymmetricFrame fr = line_symmetric_frame(d, h);
  Vec3 e(h.h2 / hs, -h.h1 / hs, 0);
  FSolution fs = solve_f(d, legs, fr.n, fr.d, e);
  Displacement disp = displacement_from_pose(fs.pose(e));
  Vec3 pt = fr.n + (t - d.a_r) * fr.d;
  return disp.apply<double>(pt);
}

}  // namespace pentamotion
