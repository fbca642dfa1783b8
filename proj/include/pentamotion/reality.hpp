#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pentamotion/common.hpp"
#include "pentamotion/geometry.hpp"
#include "pentamotion/roots.hpp"

namespace pentamotion {

/// Pedal points of an ellipse k1 >= k2 ... the feet of the normals dropped
/// from a planar query point onto the ellipse xi^2/k1^2 + zeta^2/k2^2 = 1,
/// found as the intersections of the Lagrange curve with the ellipse. The
/// minimal/maximal pedal distances are the global distance extremes of the
/// query point from the ellipse.
struct PedalResult {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> distances;

  double min_distance() const {
    return *std::min_element(distances.begin(), distances.end());
  }
  double max_distance() const {
    return *std::max_element(distances.begin(), distances.end());
  }
};

inline PedalResult pedal_points(double k1, double k2, double xi_t,
                                double zeta_t) {
  require(k1 > 0 && k2 > 0, Errc::precondition, "ellipse semi-axes must be positive");
  PedalResult out;
  auto push = [&](double xi, double zeta) {
    out.points.emplace_back(xi, zeta);
    out.distances.push_back(std::hypot(xi_t - xi, zeta_t - zeta));
  };

  const double axis_scale = std::max(k1, k2);
  if (std::abs(k1 - k2) <= 1e-12 * axis_scale) {
    // Circle: pedal construction degenerates; use the diametral points.
    double rho = std::hypot(xi_t, zeta_t);
    require(rho > 1e-12 * axis_scale, Errc::circle_case,
            "query at the circle center");
    double ux = xi_t / rho, uz = zeta_t / rho;
    push(k1 * ux, k1 * uz);
    push(-k1 * ux, -k1 * uz);
    return out;
  }

  const double kap1 = 1 / (k1 * k1), kap2 = 1 / (k2 * k2);
  const double qscale = std::hypot(xi_t, zeta_t);

  if (std::abs(zeta_t) <= 1e-12 * std::max(1.0, qscale)) {
    // Query on the xi-axis: the axis vertices plus the symmetric pair.
    require(std::abs(xi_t) > 1e-12, Errc::precondition, "query at the ellipse center");
    push(k1, 0);
    push(-k1, 0);
    double xi = kap2 * xi_t / (kap2 - kap1);
    double z2 = (1 - kap1 * xi * xi) / kap2;
    if (z2 > 0) {
      push(xi, std::sqrt(z2));
      push(xi, -std::sqrt(z2));
    }
    return out;
  }
  if (std::abs(xi_t) <= 1e-12 * std::max(1.0, qscale)) {
    push(0, k2);
    push(0, -k2);
    double zeta = kap1 * zeta_t / (kap1 - kap2);
    double x2 = (1 - kap2 * zeta * zeta) / kap1;
    if (x2 > 0) {
      push(std::sqrt(x2), zeta);
      push(-std::sqrt(x2), zeta);
    }
    return out;
  }

  // Lagrange curve (k, kap1 zeta_t k / ((kap1 - kap2) k + kap2 xi_t))
  // substituted into the ellipse equation: a quartic in k.
  const double dk = kap1 - kap2;
  std::vector<double> quartic(5);
  quartic[4] = kap1 * dk * dk;
  quartic[3] = 2 * kap1 * kap2 * dk * xi_t;
  quartic[2] = kap1 * kap2 * kap2 * xi_t * xi_t +
               kap2 * kap1 * kap1 * zeta_t * zeta_t - dk * dk;
  quartic[1] = -2 * dk * kap2 * xi_t;
  quartic[0] = -kap2 * kap2 * xi_t * xi_t;

  std::vector<double> ks = real_roots(quartic);
  // Merge near-double roots; the interval endpoints are min/max of the
  // distances and insensitive to the merge.
  std::vector<double> merged;
  for (double k : ks) {
    if (!merged.empty() && std::abs(k - merged.back()) < 1e-7 * (1 + std::abs(k)))
      continue;
    merged.push_back(k);
  }
  for (double k : merged) {
    double den = dk * k + kap2 * xi_t;
    if (std::abs(den) < 1e-300) continue;
    push(k, kap1 * zeta_t * k / den);
  }
  require(!out.points.empty(), Errc::precondition,
          "pedal quartic has no real roots");
  return out;
}

/// Range of leg lengths for which the self-motion through the leg anchored at
/// the platform parameter t has real configurations: the open interval
/// between the extreme distances of the sphere center from the axial slice of
/// the locus ellipsoid. For w = 0 the interval collapses to {|a4|}.
struct RealityInterval {
  double lower = 0, upper = 0;
  bool degenerate = false;

  /// Strict containment, matching the open-interval semantics.
  bool contains(double R) const {
    if (degenerate) return false;
    return R > lower && R < upper;
  }
};

/// Full record of the planar reduction behind a reality interval: the slice
/// of the locus ellipsoid through the sphere center and the vertical axis,
/// the in-plane coordinates of the center, and the pedal points.
struct RealityDetail {
  RealityInterval interval;
  Ellipsoid ellipsoid;
  Vec3 P_t = Vec3::Zero();
  double xi_t = 0, zeta_t = 0;
  PedalResult pedal;
};

inline RealityDetail reality_detail(const DesignParams& d, double t) {
  RealityDetail out;
  if (d.w == 0) {
    out.interval.lower = out.interval.upper = std::abs(d.a4);
    out.interval.degenerate = true;
    return out;
  }
  out.ellipsoid = ellipsoid_for(d, t);
  out.P_t = sigma_P(d, t);
  Vec3 r = out.P_t - out.ellipsoid.center;
  out.xi_t = std::hypot(r(0), r(1));
  out.zeta_t = r(2);
  out.pedal = pedal_points(out.ellipsoid.equator_radius,
                           out.ellipsoid.vertex_half_length, out.xi_t,
                           out.zeta_t);
  out.interval.lower = out.pedal.min_distance();
  out.interval.upper = out.pedal.max_distance();
  return out;
}

inline RealityInterval reality_interval(const DesignParams& d, double t) {
  return reality_detail(d, t).interval;
}

/// Sufficient certificate that no self-motion is reachable for a leg whose
/// mechanically realizable length range is [Lmin, Lmax]: the range must be
/// disjoint from the (open) reality interval.
inline bool workspace_free(const DesignParams& d, double t, double Lmin,
                           double Lmax) {
  require(Lmin <= Lmax && Lmin > 0, Errc::precondition,
          "invalid leg length range");
  RealityInterval iv = reality_interval(d, t);
  if (iv.degenerate) {
    return iv.lower < Lmin || iv.lower > Lmax;
  }
  return Lmax <= iv.lower || Lmin >= iv.upper;
}

}  // namespace pentamotion
