#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "pentamotion/common.hpp"
#include "pentamotion/geometry.hpp"
#include "pentamotion/selfmotion.hpp"
#include "pentamotion/surface.hpp"

namespace pentamotion {

// ---------------------------------------------------------------------------
// Sphere fitting
// ---------------------------------------------------------------------------

/// Least-squares sphere through a point set. The quadratic form is the
/// bilinear sum of squares q.q (no conjugation), so complex point sets are
/// fitted against the algebraic sphere condition rather than a Hermitian
/// one. rms_residual is the root mean square of the linear equation
/// residuals |q.q - 2 c.q - k|.
template <typename Scalar>
struct SphereFit {
  Vec3T<Scalar> center = Vec3T<Scalar>::Zero();
  Scalar radius_sq = Scalar(0);
  double rms_residual = 0;
  bool degenerate = false;
  int rank = 0;
};

template <typename Scalar>
inline SphereFit<Scalar> fit_sphere(const std::vector<Vec3T<Scalar>>& pts) {
  require(pts.size() >= 5, Errc::precondition, "need at least 5 points");
  const int n = static_cast<int>(pts.size());
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Mat A(n, 4);
  Vec b(n);
  for (int i = 0; i < n; ++i) {
    const auto& q = pts[i];
    A(i, 0) = Scalar(2.0) * q(0);
    A(i, 1) = Scalar(2.0) * q(1);
    A(i, 2) = Scalar(2.0) * q(2);
    A(i, 3) = Scalar(1.0);
    b(i) = q(0) * q(0) + q(1) * q(1) + q(2) * q(2);
  }
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-10 * smax) ++rank;
  }
  SphereFit<Scalar> fit;
  fit.rank = rank;
  fit.degenerate = (rank < 4);
  Vec x = svd.solve(b);
  fit.center = Vec3T<Scalar>(x(0), x(1), x(2));
  fit.radius_sq = x(3) + x(0) * x(0) + x(1) * x(1) + x(2) * x(2);
  fit.rms_residual = std::sqrt((A * x - b).squaredNorm() / n);
  return fit;
}

inline SphereFit<double> fit_sphere(const std::vector<Vec3>& pts) {
  return fit_sphere<double>(pts);
}

// ---------------------------------------------------------------------------
// Motion residual report
// ---------------------------------------------------------------------------

/// Per-pose maxima of the defining residuals of a traced motion plus the
/// relative drift of the five leg quantities against the first pose.
struct ResidualReport {
  int pose_count = 0;
  double max_quadric = 0;
  double max_e0 = 0, max_f0 = 0;
  double max_omega2 = 0, max_omega3 = 0, max_omega4 = 0, max_pi5 = 0;
  double max_leg_drift = 0;
  double leg1_vs_r1 = 0;  // |l1 - sqrt(r1_sq)|, when r1 is known
  std::array<double, 5> baseline_legs{};
  bool empty = true;
  bool pass = false;
};

inline ResidualReport motion_residual_report(const DesignParams& dp,
                                             const LegParams& legs,
                                             const LineSymmetricFrame& frame,
                                             const std::vector<StudyPose>& poses) {
  ResidualReport rep;
  rep.pose_count = static_cast<int>(poses.size());
  if (poses.empty()) {
    rep.empty = true;
    rep.pass = true;  // vacuous, flagged by pose_count = 0
    return rep;
  }
  rep.empty = false;
  for (size_t i = 0; i < poses.size(); ++i) {
    StudyPose p = poses[i].normalized();
    ConstraintResiduals cr =
        constraint_residuals(dp, legs, frame.n, frame.d, p);
    rep.max_quadric = std::max(rep.max_quadric, std::abs(p.quadric_residual()));
    rep.max_e0 = std::max(rep.max_e0, std::abs(p.e0));
    rep.max_f0 = std::max(rep.max_f0, std::abs(p.f0));
    rep.max_omega2 = std::max(rep.max_omega2, std::abs(cr.omega2));
    rep.max_omega3 = std::max(rep.max_omega3, std::abs(cr.omega3));
    rep.max_omega4 = std::max(rep.max_omega4, std::abs(cr.omega4));
    rep.max_pi5 = std::max(rep.max_pi5, std::abs(cr.pi5));
    std::array<double, 5> l = leg_lengths(dp, legs, frame.n, frame.d, p);
    if (i == 0) {
      rep.baseline_legs = l;
    } else {
      for (int k = 0; k < 5; ++k) {
        double drift = std::abs(l[k] - rep.baseline_legs[k]) /
                       std::max(1.0, std::abs(rep.baseline_legs[k]));
        rep.max_leg_drift = std::max(rep.max_leg_drift, drift);
      }
    }
    if (legs.has_r1() && legs.r1_sq >= 0) {
      rep.leg1_vs_r1 = std::max(
          rep.leg1_vs_r1, std::abs(l[0] - std::sqrt(legs.r1_sq)));
    }
  }
  const Tolerances& tol = tolerances();
  rep.pass = rep.max_quadric <= tol.residual && rep.max_e0 <= tol.residual &&
             rep.max_f0 <= tol.residual && rep.max_omega2 <= tol.residual &&
             rep.max_omega3 <= tol.residual && rep.max_omega4 <= tol.residual &&
             rep.max_pi5 <= tol.residual && rep.max_leg_drift <= tol.leg_drift;
  return rep;
}

inline ResidualReport motion_residual_report(const TracedMotion& tm) {
  return motion_residual_report(tm.design, tm.legs, tm.frame, tm.poses);
}

// ---------------------------------------------------------------------------
// Imaginary cubic curves of the reference example
// ---------------------------------------------------------------------------

namespace detail {

/// Coefficients in z (degree 0..3) of the two cubic polynomials whose
/// combination determines the spherical-point curves inside the isotropic
/// planes through the platform line of the reference example.
inline std::array<double, 4> iso_re_coeffs(double y) {
  return {274400 * y * y * y + 3927840 * y * y + 15910300 * y + 17761620,
          3374238 * y + 13169366 - 30870 * y * y,
          -5472908 - 1165514 * y,
          113190};
}

inline std::array<double, 4> iso_im_coeffs(double y) {
  return {-1840195 * y * y - 15809850 * y - 29479660,
          984410 * y * y + 9573816 * y + 20061237,
          -115248 * y + 817369,
          -408170};
}

/// x solved from the isotropic plane equation
///   91x - 84y - 126z - 122 + sign*(147y - 98z + 714) i = 0.
inline Complex iso_plane_x(int sign, Complex y, Complex z) {
  Complex lin = 84.0 * y + 126.0 * z + 122.0;
  Complex im = 147.0 * y - 98.0 * z + 714.0;
  return (lin - Complex(0, sign) * im) / 91.0;
}

}  // namespace detail

/// Complex points of the planar cubic inside the isotropic plane with the
/// given sign, sampled at real y values: solves the cubic in z, picks one
/// root per sample, completes x from the plane equation.
inline std::vector<Vec3c> isotropic_cubic_points(int sign,
                                                 const std::vector<double>& ys) {
  std::vector<Vec3c> pts;
  pts.reserve(ys.size());
  int pick = 0;
  for (double y : ys) {
    auto re = detail::iso_re_coeffs(y);
    auto im = detail::iso_im_coeffs(y);
    std::vector<Complex> c(4);
    for (int k = 0; k < 4; ++k) c[k] = Complex(re[k], sign * im[k]);
    std::vector<Complex> roots = poly_roots(c);
    require(!roots.empty(), Errc::trace_failure,
            "cubic in z degenerated unexpectedly");
    Complex z = roots[pick % roots.size()];
    ++pick;
    Complex x = detail::iso_plane_x(sign, Complex(y, 0), z);
    pts.push_back(Vec3c(x, Complex(y, 0), z));
  }
  return pts;
}

/// Report of the spherical-trajectory checks on the isotropic cubic curves of
/// the reference example, plus controls: points of the platform line itself
/// fit real spheres centered on the sphere-center curve, and points off the
/// cubics fail the fit by orders of magnitude.
struct IsotropicCubicsReport {
  int points_per_plane = 0;
  double max_curve_rms = 0;
  double max_line_center_err = 0;
  double min_offcurve_rms = 0;
};

inline IsotropicCubicsReport isotropic_cubics_check(int trace_count = 48,
                                                    int points_per_plane = 8) {
  DesignParams d = reference_design();
  Direction h = reference_direction();
  TracedMotion tm = trace_motion(d, h, trace_count);

  std::vector<Displacement> disps;
  disps.reserve(tm.poses.size());
  for (const StudyPose& p : tm.poses) disps.push_back(displacement_from_pose(p));

  auto trajectory = [&](const Vec3c& x) {
    std::vector<Vec3c> q;
    q.reserve(disps.size());
    for (const Displacement& D : disps) q.push_back(D.apply<Complex>(x));
    return q;
  };

  IsotropicCubicsReport rep;
  rep.points_per_plane = points_per_plane;
  rep.min_offcurve_rms = std::numeric_limits<double>::infinity();

  std::vector<double> ys;
  for (int j = 0; j < points_per_plane; ++j) ys.push_back(-1.5 + 0.5 * j);

  for (int sign : {+1, -1}) {
    std::vector<Vec3c> pts = isotropic_cubic_points(sign, ys);
    for (const Vec3c& p : pts) {
      SphereFit<Complex> fit = fit_sphere<Complex>(trajectory(p));
      rep.max_curve_rms = std::max(rep.max_curve_rms, fit.rms_residual);
      Vec3c off = p;
      off(2) += Complex(0.01, 0);
      off(0) = detail::iso_plane_x(sign, off(1), off(2));  // stay in the plane
      SphereFit<Complex> bad = fit_sphere<Complex>(trajectory(off));
      rep.min_offcurve_rms = std::min(rep.min_offcurve_rms, bad.rms_residual);
    }
  }

  // The linear factor inside the plane: points of the platform line; their
  // trajectories fit real spheres centered on the sphere-center curve.
  for (double y : {-2.0, 0.0, 1.0, 3.0}) {
    double z = (102 + 21 * y) / 14.0;
    Complex xc = detail::iso_plane_x(+1, Complex(y, 0), Complex(z, 0));
    Vec3 pt(xc.real(), y, z);
    double t = d.a_r + (pt - tm.frame.n).dot(tm.frame.d);
    std::vector<Vec3> q;
    q.reserve(disps.size());
    for (const Displacement& D : disps) q.push_back(D.apply<double>(pt));
    SphereFit<double> fit = fit_sphere(q);
    rep.max_line_center_err = std::max(
        rep.max_line_center_err, (fit.center - sigma_P(d, t)).norm());
  }
  return rep;
}

}  // namespace pentamotion
