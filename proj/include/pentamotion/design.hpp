#pragma once

#include <cmath>
#include <limits>

#include "pentamotion/common.hpp"
#include "pentamotion/pose.hpp"

namespace pentamotion {

enum class PentapodType { type1, type2 };

inline const char* type_name(PentapodType t) {
  return t == PentapodType::type1 ? "Type1" : "Type2";
}

/// The five geometric design numbers of a linear pentapod together with the
/// derived quantities v = 2(a_r - a4) and w = a_r^2 + a_c^2 - a4^2 and the
/// type classification. The base anchor M1 sits at (A,0,C), M5 at the origin;
/// the collinear platform anchors are encoded by a2 = a_r + i a_c (with its
/// conjugate a3) and the real a4.
struct DesignParams {
  double A = 1, C = 0, a_r = 0, a_c = 1, a4 = 0;
  double v = 0, w = 0;
  PentapodType ptype = PentapodType::type2;

  Complex a2() const { return Complex(a_r, a_c); }
  Complex a3() const { return Complex(a_r, -a_c); }

  /// (a2 - a4)(a3 - a4), real and positive since a_c != 0.
  double q() const { return (a_r - a4) * (a_r - a4) + a_c * a_c; }
};

inline DesignParams classify(double A, double C, double a_r, double a_c,
                             double a4) {
  for (double x : {A, C, a_r, a_c, a4}) {
    require(std::isfinite(x), Errc::invalid_design, "non-finite design value");
  }
  require(A != 0.0, Errc::invalid_design, "A = 0");
  require(a_c != 0.0, Errc::invalid_design, "a_c = 0");
  bool a4_zero = (a4 == 0.0);
  bool C_zero = (C == 0.0);
  if (a4_zero != C_zero) {
    fail(Errc::unsupported_type,
         "exactly one of a4, C vanishes: neither Type 1 nor Type 2");
  }
  DesignParams dp;
  dp.A = A;
  dp.C = C;
  dp.a_r = a_r;
  dp.a_c = a_c;
  dp.a4 = a4;
  dp.v = 2 * (a_r - a4);
  dp.w = a_r * a_r + a_c * a_c - a4 * a4;
  dp.ptype = a4_zero ? PentapodType::type2 : PentapodType::type1;

  // Cross-check against the complex definitions v = a2 + a3 - 2 a4 and
  // w = a2 a3 - a4^2.
  Complex vc = dp.a2() + dp.a3() - 2.0 * a4;
  Complex wc = dp.a2() * dp.a3() - a4 * a4;
  double scale = 1 + std::abs(a_r) + std::abs(a_c) + std::abs(a4);
  require(std::abs(vc - dp.v) <= 1e-12 * scale &&
              std::abs(wc - dp.w) <= 1e-12 * scale * scale,
          Errc::invalid_design, "v/w consistency check failed");
  return dp;
}

/// Leg parameters: the Darboux plane offsets p2, p3 (conjugate complex), the
/// real Darboux offset p4, the Mannheim offset p5 and the squared radius of
/// the leg-1 sphere. p5/r1_sq are NaN until fixed by a concrete motion.
struct LegParams {
  Complex p2{0, 0}, p3{0, 0};
  double p4 = 0;
  double p5 = std::numeric_limits<double>::quiet_NaN();
  double r1_sq = std::numeric_limits<double>::quiet_NaN();

  bool has_p5() const { return std::isfinite(p5); }
  bool has_r1() const { return std::isfinite(r1_sq); }
};

/// Darboux offsets of the self-motion condition:
///   p2 = A a3 v / (a3 - a4)^2,  p3 = conj(p2),
///   p4 = -C a4 v / ((a2 - a4)(a3 - a4)).
inline LegParams leg_params(const DesignParams& d) {
  LegParams lp;
  Complex den = (d.a3() - d.a4) * (d.a3() - d.a4);
  lp.p2 = d.A * d.a3() * d.v / den;
  lp.p3 = std::conj(lp.p2);
  lp.p4 = -d.C * d.a4 * d.v / d.q();
  return lp;
}

/// Residual of the single remaining condition tying p5 and R1^2:
///   q^2 [2 w p5 - v R1^2 - (2w - v a4) a4] + v w^2 (A^2 + C^2) = 0.
inline double leg_condition_residual(const DesignParams& d, double p5,
                                     double r1_sq) {
  double q2 = d.q() * d.q();
  return q2 * (2 * d.w * p5 - d.v * r1_sq - (2 * d.w - d.v * d.a4) * d.a4) +
         d.v * d.w * d.w * (d.A * d.A + d.C * d.C);
}

/// Solves the leg condition for R1^2 given p5. The result may be negative;
/// reality of the motion is decided by the reality-interval analysis.
inline double r1_sq_from_p5(const DesignParams& d, double p5) {
  require(d.v != 0.0, Errc::special_case_v0,
          "v = 0 forces p5 = a4 = a_r and leaves R1 free");
  double q2 = d.q() * d.q();
  return (2 * d.w * p5 - (2 * d.w - d.v * d.a4) * d.a4 +
          d.v * d.w * d.w * (d.A * d.A + d.C * d.C) / q2) /
         d.v;
}

inline double p5_from_r1_sq(const DesignParams& d, double r1_sq) {
  require(d.v != 0.0, Errc::special_case_v0,
          "v = 0 forces p5 = a4 = a_r and leaves R1 free");
  require(d.w != 0.0, Errc::precondition,
          "w = 0 forces R1 = |a4| and leaves p5 free");
  double q2 = d.q() * d.q();
  return (d.v * r1_sq + (2 * d.w - d.v * d.a4) * d.a4 -
          d.v * d.w * d.w * (d.A * d.A + d.C * d.C) / q2) /
         (2 * d.w);
}

inline LegParams legs_with_p5(const DesignParams& d, double p5) {
  LegParams lp = leg_params(d);
  lp.p5 = p5;
  if (d.v != 0.0) {
    lp.r1_sq = r1_sq_from_p5(d, p5);
  }
  return lp;
}

/// Anchor points in the fixed/moving frames. M2, M3 are the ideal cyclic
/// directions (1, +-i, 0), M4 the ideal z-direction; m2, m3 are conjugate
/// complex platform points m_i = n + (a_i - a_r) d with a1 = 0.
struct AnchorSet {
  Vec3 M1, M5, M4;
  Vec3c M2, M3;
  Vec3 m1, m4;
  Vec3c m2, m3;
  Vec3 m5_dir;
};

inline AnchorSet anchors(const DesignParams& dp, const Vec3& n,
                         const Direction& h) {
  AnchorSet a;
  a.M1 = Vec3(dp.A, 0, dp.C);
  a.M5 = Vec3::Zero();
  a.M4 = Vec3(0, 0, 1);
  a.M2 = Vec3c(Complex(1, 0), Complex(0, 1), Complex(0, 0));
  a.M3 = Vec3c(Complex(1, 0), Complex(0, -1), Complex(0, 0));
  const Vec3& d = h.d;
  a.m1 = n - dp.a_r * d;
  a.m4 = n + (dp.a4 - dp.a_r) * d;
  for (int i = 0; i < 3; ++i) {
    a.m2(i) = Complex(n(i), dp.a_c * d(i));
    a.m3(i) = std::conj(a.m2(i));
  }
  a.m5_dir = d;
  return a;
}

}  // namespace pentamotion
