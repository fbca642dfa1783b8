#pragma once

#include <cmath>

#include "pentamotion/common.hpp"

namespace pentamotion {

/// Study parameters (e0:e1:e2:e3:f0:f1:f2:f3) of a spatial displacement.
/// Valid poses satisfy the Study quadric e0*f0 + ... + e3*f3 = 0 and have
/// N = e0^2 + ... + e3^2 > 0. (e,f) and (k*e, k*f) denote the same
/// displacement for k != 0.
struct StudyPose {
  double e0 = 1, e1 = 0, e2 = 0, e3 = 0;
  double f0 = 0, f1 = 0, f2 = 0, f3 = 0;

  double norm_sq() const { return e0 * e0 + e1 * e1 + e2 * e2 + e3 * e3; }
  double quadric_residual() const {
    return e0 * f0 + e1 * f1 + e2 * f2 + e3 * f3;
  }

  Vec3 e_vec() const { return Vec3(e1, e2, e3); }
  Vec3 f_vec() const { return Vec3(f1, f2, f3); }

  /// Scales so that N = 1 and flips the sign so that the first nonzero
  /// rotation component is positive. This resolves the antipodal (e,f) vs
  /// (-e,-f) ambiguity deterministically.
  StudyPose normalized() const {
    double n = norm_sq();
    require(n > 0, Errc::zero_norm, "pose has N = 0");
    double s = 1.0 / std::sqrt(n);
    StudyPose p{e0 * s, e1 * s, e2 * s, e3 * s,
                f0 * s, f1 * s, f2 * s, f3 * s};
    const double bits[4] = {p.e0, p.e1, p.e2, p.e3};
    for (double b : bits) {
      if (std::abs(b) > 1e-13) {
        if (b < 0) {
          p.e0 = -p.e0; p.e1 = -p.e1; p.e2 = -p.e2; p.e3 = -p.e3;
          p.f0 = -p.f0; p.f1 = -p.f1; p.f2 = -p.f2; p.f3 = -p.f3;
        }
        break;
      }
    }
    return p;
  }
};

/// Euclidean displacement m -> R*m + s with R orthogonal, det R = +1.
struct Displacement {
  Mat3 R = Mat3::Identity();
  Vec3 s = Vec3::Zero();

  template <typename Scalar>
  Vec3T<Scalar> apply(const Vec3T<Scalar>& x) const {
    Vec3T<Scalar> y;
    for (int i = 0; i < 3; ++i) {
      y(i) = R(i, 0) * x(0) + R(i, 1) * x(1) + R(i, 2) * x(2) + s(i);
    }
    return y;
  }
};

namespace detail {

/// Homogeneous quadratic forms of the rotation matrix and translation vector
/// in the Study parameters (no division by N). For a pose with N = 1 these
/// are the actual R and s.
inline void study_quadratic_forms(const StudyPose& p, Mat3& R, Vec3& s) {
  const double e0 = p.e0, e1 = p.e1, e2 = p.e2, e3 = p.e3;
  const double f0 = p.f0, f1 = p.f1, f2 = p.f2, f3 = p.f3;
  s(0) = -2 * (e0 * f1 - e1 * f0 + e2 * f3 - e3 * f2);
  s(1) = -2 * (e0 * f2 - e2 * f0 + e3 * f1 - e1 * f3);
  s(2) = -2 * (e0 * f3 - e3 * f0 + e1 * f2 - e2 * f1);
  R(0, 0) = e0 * e0 + e1 * e1 - e2 * e2 - e3 * e3;
  R(0, 1) = 2 * (e1 * e2 - e0 * e3);
  R(0, 2) = 2 * (e1 * e3 + e0 * e2);
  R(1, 0) = 2 * (e1 * e2 + e0 * e3);
  R(1, 1) = e0 * e0 - e1 * e1 + e2 * e2 - e3 * e3;
  R(1, 2) = 2 * (e2 * e3 - e0 * e1);
  R(2, 0) = 2 * (e1 * e3 - e0 * e2);
  R(2, 1) = 2 * (e2 * e3 + e0 * e1);
  R(2, 2) = e0 * e0 - e1 * e1 - e2 * e2 + e3 * e3;
}

}  // namespace detail

inline Displacement displacement_from_pose(const StudyPose& pose) {
  StudyPose p = pose.normalized();
  Displacement d;
  detail::study_quadratic_forms(p, d.R, d.s);
  return d;
}

/// Line in 3-space by Pluecker coordinates (direction e, moment f) with
/// e . f = 0. The moment convention is f = e x P for points P of the line,
/// so the pedal point w.r.t. the origin is f x e.
struct PluckerLine {
  Vec3 direction = Vec3::UnitZ();
  Vec3 moment = Vec3::Zero();

  Vec3 pedal() const { return moment.cross(direction); }

  double plucker_residual() const { return direction.dot(moment); }

  double distance_to(const Vec3& p) const {
    Vec3 u = direction.normalized();
    Vec3 P = (moment / direction.norm()).cross(u);
    Vec3 r = p - P;
    return (r - u * u.dot(r)).norm();
  }

  /// Unit direction with first nonzero component positive.
  PluckerLine normalized() const {
    double n = direction.norm();
    require(n > 0, Errc::zero_norm, "line with zero direction");
    PluckerLine l{direction / n, moment / n};
    for (int i = 0; i < 3; ++i) {
      if (std::abs(l.direction(i)) > 1e-13) {
        if (l.direction(i) < 0) {
          l.direction = -l.direction;
          l.moment = -l.moment;
        }
        break;
      }
    }
    return l;
  }

  static PluckerLine from_points(const Vec3& p, const Vec3& q) {
    Vec3 e = q - p;
    PluckerLine l{e, e.cross(p)};
    return l.normalized();
  }
};

/// Pluecker line of a line-symmetric pose (e0 = f0 = 0): the generator of the
/// basic surface whose half-turn produces the pose's displacement.
inline PluckerLine plucker_from_pose(const StudyPose& pose) {
  StudyPose p = pose.normalized();
  double fs = std::max(1.0, p.f_vec().norm());
  double tol = tolerances().residual;
  if (std::abs(p.e0) > tol || std::abs(p.f0) > tol * fs) {
    fail(Errc::not_line_symmetric,
         "pose has e0 or f0 nonzero after normalization");
  }
  return PluckerLine{p.e_vec(), p.f_vec()}.normalized();
}

/// Half-turn of a point about a line. Involutive; fixes exactly the line.
template <typename Scalar>
inline Vec3T<Scalar> reflect_in_line(const PluckerLine& line,
                                     const Vec3T<Scalar>& x) {
  Vec3 u = line.direction.normalized();
  Vec3 P = (line.moment / line.direction.norm()).cross(u);  // pedal point
  Vec3T<Scalar> y;
  // x -> P + (2 u u^T - I)(x - P)
  Scalar d = u(0) * (x(0) - P(0)) + u(1) * (x(1) - P(1)) + u(2) * (x(2) - P(2));
  for (int i = 0; i < 3; ++i) {
    y(i) = P(i) + 2.0 * u(i) * d - (x(i) - P(i));
  }
  return y;
}

inline Vec3 reflect_in_line(const PluckerLine& line, const Vec3& x) {
  return reflect_in_line<double>(line, x);
}

/// Rational parametrization of the unit sphere:
///   d1 = 2 h0 h1 / S,  d2 = 2 h0 h2 / S,  d3 = (h1^2 + h2^2 - h0^2) / S
/// with S = h0^2 + h1^2 + h2^2. Scale-invariant in (h0:h1:h2).
inline Vec3 direction_from_h(double h0, double h1, double h2) {
  double s = h0 * h0 + h1 * h1 + h2 * h2;
  require(s > 0, Errc::all_zero, "(h0,h1,h2) = (0,0,0)");
  return Vec3(2 * h0 * h1 / s, 2 * h0 * h2 / s, (h1 * h1 + h2 * h2 - h0 * h0) / s);
}

/// Homogeneous direction parameters together with the derived unit vector.
struct Direction {
  double h0 = 1, h1 = 0, h2 = 0;
  Vec3 d = Vec3(0, 0, -1);

  static Direction from_h(double h0, double h1, double h2) {
    Direction h;
    h.h0 = h0;
    h.h1 = h1;
    h.h2 = h2;
    h.d = direction_from_h(h0, h1, h2);
    return h;
  }

  double sum_sq() const { return h0 * h0 + h1 * h1 + h2 * h2; }
};

}  // namespace pentamotion
