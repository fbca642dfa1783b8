#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pentamotion/common.hpp"
#include "pentamotion/design.hpp"
#include "pentamotion/homog_poly.hpp"
#include "pentamotion/pose.hpp"
#include "pentamotion/roots.hpp"

namespace pentamotion {

// ---------------------------------------------------------------------------
// Constraint system
// ---------------------------------------------------------------------------

/// Values of the three Darboux conditions, the Mannheim condition and the
/// Study quadric at a pose. All five vanish simultaneously exactly on a pose
/// of the self-motion. omega3 is the conjugate of omega2 for real poses.
struct ConstraintResiduals {
  Complex omega2, omega3;
  double omega4 = 0, pi5 = 0, psi = 0;

  double max_abs() const {
    return std::max({std::abs(omega2), std::abs(omega3), std::abs(omega4),
                     std::abs(pi5), std::abs(psi)});
  }
};

inline ConstraintResiduals constraint_residuals(const DesignParams& dp,
                                                const LegParams& legs,
                                                const Vec3& n, const Vec3& d,
                                                const StudyPose& pose) {
  require(pose.norm_sq() > 0, Errc::zero_norm, "pose has N = 0");
  Mat3 R;
  Vec3 s;
  detail::study_quadratic_forms(pose, R, s);
  const double N = pose.norm_sq();

  Vec3c m2, m3;
  for (int i = 0; i < 3; ++i) {
    m2(i) = Complex(n(i), dp.a_c * d(i));
    m3(i) = std::conj(m2(i));
  }
  const Vec3 m4 = n + (dp.a4 - dp.a_r) * d;

  auto crow = [&R](int r, const Vec3c& m) {
    return R(r, 0) * m(0) + R(r, 1) * m(1) + R(r, 2) * m(2);
  };

  ConstraintResiduals res;
  const Complex i1(0, 1);
  res.omega2 = (s(0) + crow(0, m2)) - i1 * (s(1) + crow(1, m2)) - legs.p2 * N;
  res.omega3 = (s(0) + crow(0, m3)) + i1 * (s(1) + crow(1, m3)) - legs.p3 * N;
  res.omega4 = (s(2) + R.row(2).dot(m4)) - legs.p4 * N;
  const Vec3 p5vec = n + (legs.p5 - dp.a_r) * d;
  res.pi5 = (R * d).dot(s + R * p5vec) / N;
  res.psi = pose.quadric_residual();
  return res;
}

// ---------------------------------------------------------------------------
// Linear solve for the translational parameters
// ---------------------------------------------------------------------------

/// Solution of the 4x4 real system (Psi, Re Omega2, Im Omega2, Omega4) for
/// (f0, f1, f2, f3) at a rotational direction e with e0 = 0. `denom` is the
/// common denominator 2(e1^2+e2^2+e3^2) of the f-values as rational functions
/// of e; denom * f0 is a homogeneous cubic polynomial in e.
struct FSolution {
  double f0 = 0, f1 = 0, f2 = 0, f3 = 0;
  double denom = 0;

  StudyPose pose(const Vec3& e) const {
    return StudyPose{0, e(0), e(1), e(2), f0, f1, f2, f3};
  }
};

inline FSolution solve_f(const DesignParams& dp, const LegParams& legs,
                         const Vec3& n, const Vec3& d, const Vec3& e) {
  const double e1 = e(0), e2 = e(1), e3 = e(2);
  const double N = e.squaredNorm();
  require(N > 0, Errc::singular_system, "e = 0");

  // Rotation quadratic form at e0 = 0: R = 2 e e^T - N I.
  Mat3 R = 2.0 * (e * e.transpose()) - N * Mat3::Identity();

  Vec3c m2;
  for (int i = 0; i < 3; ++i) m2(i) = Complex(n(i), dp.a_c * d(i));
  const Vec3 m4 = n + (dp.a4 - dp.a_r) * d;

  // Complex row (r1 - i r2) applied to m2.
  Complex rm(0, 0);
  for (int k = 0; k < 3; ++k) rm += Complex(R(0, k), -R(1, k)) * m2(k);
  const Complex b2 = legs.p2 * N - rm;
  const double b4 = legs.p4 * N - R.row(2).dot(m4);

  Eigen::Matrix4d M;
  Eigen::Vector4d rhs;
  M << 0, e1, e2, e3,
      2 * e1, 0, 2 * e3, -2 * e2,
      -2 * e2, 2 * e3, 0, -2 * e1,
      2 * e3, 2 * e2, -2 * e1, 0;
  rhs << 0, b2.real(), b2.imag(), b4;

  // det M = 8 N^2 analytically; guard anyway.
  Eigen::PartialPivLU<Eigen::Matrix4d> lu(M);
  Eigen::Vector4d f = lu.solve(rhs);
  require(f.allFinite(), Errc::singular_system, "f-solve is singular");
  return FSolution{f(0), f(1), f(2), f(3), 2 * N};
}

// ---------------------------------------------------------------------------
// Line-symmetric frame
// ---------------------------------------------------------------------------

/// The frame solution that makes the self-motion line-symmetric:
///   n = (a_c d2, -a_c d1, (a_r - a4) d3),  lambda = 2(h0^2+h1^2+h2^2),
/// with the linear form L = d1 e1 + d2 e2 + d3 e3.
struct LineSymmetricFrame {
  Direction h;
  Vec3 d;
  Vec3 n;
  double lambda = 0;
  HomogPoly3 L;
};

inline LineSymmetricFrame line_symmetric_frame(const DesignParams& dp,
                                               const Direction& h) {
  LineSymmetricFrame fr;
  fr.h = h;
  fr.d = h.d;
  fr.n = Vec3(dp.a_c * h.d(1), -dp.a_c * h.d(0), (dp.a_r - dp.a4) * h.d(2));
  fr.lambda = 2 * h.sum_sq();
  fr.L = HomogPoly3::linear(h.d);
  return fr;
}

// ---------------------------------------------------------------------------
// Polynomial recovery by interpolation
// ---------------------------------------------------------------------------

enum class NodeGrid { primary, shifted };

inline std::vector<Vec3> cubic_nodes(NodeGrid g) {
  std::vector<Vec3> nodes;
  if (g == NodeGrid::primary) {
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j) nodes.emplace_back(i, j, 1);
    nodes.emplace_back(1, 0, 0);
    nodes.emplace_back(0, 1, 0);
    nodes.emplace_back(1, 1, 0);
    nodes.emplace_back(1, -1, 0);
  } else {
    for (int i : {-2, 2, 3})
      for (int j : {-2, 2, 3}) nodes.emplace_back(i, j, 1);
    nodes.emplace_back(2, 1, 0);
    nodes.emplace_back(1, 2, 0);
    nodes.emplace_back(2, -1, 0);
    nodes.emplace_back(3, -1, 0);
  }
  return nodes;
}

inline std::vector<Vec3> quartic_nodes(NodeGrid g) {
  std::vector<Vec3> nodes;
  if (g == NodeGrid::primary) {
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) nodes.emplace_back(i, j, 1);
    nodes.emplace_back(1, 0, 0);
    nodes.emplace_back(0, 1, 0);
    nodes.emplace_back(1, 1, 0);
    nodes.emplace_back(1, -1, 0);
    nodes.emplace_back(2, 1, 0);
    nodes.emplace_back(1, 2, 0);
  } else {
    for (int i : {-4, -3, 3, 4})
      for (int j : {-4, -3, 3, 4}) nodes.emplace_back(i, j, 1);
    nodes.emplace_back(0, 3, 1);
    nodes.emplace_back(3, 0, 1);
    nodes.emplace_back(0, -3, 1);
    nodes.emplace_back(-3, 0, 1);
    nodes.emplace_back(3, 2, 0);
    nodes.emplace_back(2, 3, 0);
    nodes.emplace_back(3, -2, 0);
    nodes.emplace_back(4, 1, 0);
    nodes.emplace_back(1, 4, 0);
  }
  return nodes;
}

/// Recovers the homogeneous cubic numerator of f0 (the line-symmetry
/// condition of the motion) by sampling denom(e) * f0(e) on an integer grid.
inline HomogPoly3 recover_F(const DesignParams& dp, const LegParams& legs,
                            const Vec3& n, const Vec3& d,
                            NodeGrid grid = NodeGrid::primary) {
  std::vector<Vec3> nodes = cubic_nodes(grid);
  Eigen::VectorXd values(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) {
    FSolution fs = solve_f(dp, legs, n, d, nodes[k]);
    values(k) = fs.denom * fs.f0;
  }
  return HomogPoly3::fit(3, nodes, values);
}

/// Value of the Mannheim numerator at a rotational direction e with the
/// f-solve substituted: a homogeneous quartic in e, the polynomial whose zero
/// set carries the self-motion.
inline double mannheim_numerator(const DesignParams& dp, const LegParams& legs,
                                 const Vec3& n, const Vec3& d, const Vec3& e) {
  FSolution fs = solve_f(dp, legs, n, d, e);
  StudyPose pose = fs.pose(e);
  Mat3 R;
  Vec3 s;
  detail::study_quadratic_forms(pose, R, s);
  const Vec3 p5vec = n + (legs.p5 - dp.a_r) * d;
  return (R * d).dot(s + R * p5vec);
}

inline HomogPoly3 recover_G(const DesignParams& dp, const LegParams& legs,
                            const Vec3& n, const Vec3& d,
                            NodeGrid grid = NodeGrid::primary) {
  require(legs.has_p5(), Errc::precondition, "recover_G requires p5");
  std::vector<Vec3> nodes = quartic_nodes(grid);
  Eigen::VectorXd values(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) {
    values(k) = mannheim_numerator(dp, legs, n, d, nodes[k]);
  }
  return HomogPoly3::fit(4, nodes, values);
}

// ---------------------------------------------------------------------------
// The planar quartic H in polar split form
// ---------------------------------------------------------------------------

/// Homogenized polar parameters (rho0, rho1, tau0, tau1) representing a
/// direction triple via
///   h0 = (tau1^2+tau0^2) rho0, h1 = (tau1^2-tau0^2) rho1, h2 = 2 tau0 tau1 rho1,
/// normalized here so that tau0^2 + tau1^2 = 1.
struct PolarParams {
  double rho0 = 0, rho1 = 0, tau0 = 0, tau1 = 1;
};

inline PolarParams polar_from_h(const Direction& h) {
  PolarParams p;
  p.rho0 = h.h0;
  double S = std::hypot(h.h1, h.h2);
  p.rho1 = S;
  if (S == 0) {
    p.tau0 = 0;
    p.tau1 = 1;
    return p;
  }
  double c2 = h.h1 / S, s2 = h.h2 / S;
  p.tau1 = std::sqrt(std::max(0.0, (1 + c2) / 2));
  if (p.tau1 > 1e-8) {
    p.tau0 = s2 / (2 * p.tau1);
  } else {
    p.tau0 = 1;
    p.tau1 = 0;
  }
  return p;
}

/// Split coefficients of the tau-quadratic
///   H0 tau0^2 + H1 tau0 tau1 + H2 tau1^2
/// the quartic direction condition factors into. H0 + H2 is affine in the
/// Mannheim offset p5; H1 and H0 - H2 do not involve p5.
struct QuarticH {
  double h1 = 0;
  double h0_minus_h2 = 0;
  double h0_plus_h2_const = 0;
  double h0_plus_h2_p5 = 0;  // strictly negative for valid designs

  double h0_plus_h2(double p5) const { return h0_plus_h2_const + h0_plus_h2_p5 * p5; }
  double H0(double p5) const { return (h0_plus_h2(p5) + h0_minus_h2) / 2; }
  double H2(double p5) const { return (h0_plus_h2(p5) - h0_minus_h2) / 2; }

  double tau_quadratic(double p5, double tau0, double tau1) const {
    return H0(p5) * tau0 * tau0 + h1 * tau0 * tau1 + H2(p5) * tau1 * tau1;
  }
};

inline QuarticH quartic_h(const DesignParams& d, double rho0, double rho1) {
  const double q = d.q();
  const double r2 = rho0 * rho0 + rho1 * rho1;
  const double r04 = rho0 * rho0 * rho0 * rho0;
  const double r14 = rho1 * rho1 * rho1 * rho1;
  const double rr = rho0 * rho0 * rho1 * rho1;
  QuarticH H;
  const double common = 8 * rho0 * rho1 * d.A * (d.a4 - d.a_r) * r2;
  H.h1 = common * (d.a_r * d.a_r - d.a4 * d.a4 + d.a_c * d.a_c) * d.a_c;
  H.h0_minus_h2 =
      common * (d.a_r * (d.a_r - d.a4) * (d.a_r - d.a4) +
                d.a_c * d.a_c * (d.a_r - 2 * d.a4));
  H.h0_plus_h2_const =
      2 * q * (2 * d.a4 * (r14 - r04) * (d.a4 - d.a_r) * d.C +
               q * (r04 + r14) * d.a4 + q * 2 * rr * (2 * d.a_r - d.a4));
  H.h0_plus_h2_p5 = -2 * q * q * (r04 + r14 + 2 * rr);
  return H;
}

/// Value of the quartic direction condition at h for a given p5, evaluated in
/// the tau-normalized polar representation of h.
inline double quartic_h_value(const DesignParams& d, const Direction& h,
                              double p5) {
  PolarParams p = polar_from_h(h);
  QuarticH H = quartic_h(d, p.rho0, p.rho1);
  return H.tau_quadratic(p5, p.tau0, p.tau1);
}

/// The unique Mannheim offset for which the direction condition vanishes at
/// h; the condition is linear in p5 with strictly nonzero slope.
inline double p5_from_h(const DesignParams& d, const Direction& h) {
  PolarParams p = polar_from_h(h);
  QuarticH H = quartic_h(d, p.rho0, p.rho1);
  double at0 = H.tau_quadratic(0, p.tau0, p.tau1);
  double at1 = H.tau_quadratic(1, p.tau0, p.tau1);
  double slope = at1 - at0;
  double scale = std::abs(at0) + std::abs(at1) + 1e-300;
  require(std::abs(slope) > 1e-14 * scale, Errc::degenerate_direction,
          "p5 coefficient of the direction condition vanishes");
  return -at0 / slope;
}

/// Directions h solving the condition for a given p5 and radial parameters
/// (rho0, rho1): up to two real solutions of the tau-quadratic, mapped back
/// through the polar parametrization. Empty when the quadratic has no real
/// root for this rho.
inline std::vector<Direction> h_from_p5(const DesignParams& d, double p5,
                                        double rho0, double rho1) {
  require(rho0 != 0 || rho1 != 0, Errc::precondition, "(rho0, rho1) = (0,0)");
  QuarticH H = quartic_h(d, rho0, rho1);
  const double a = H.H0(p5), b = H.h1, c = H.H2(p5);
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  std::vector<std::pair<double, double>> taus;  // (tau0, tau1)
  if (scale == 0) return {};
  if (std::abs(a) <= 1e-13 * scale) {
    taus.emplace_back(1.0, 0.0);
    if (std::abs(b) > 1e-13 * scale) taus.emplace_back(-c / b, 1.0);
  } else {
    double disc = b * b - 4 * a * c;
    if (disc < 0) return {};
    double sq = std::sqrt(disc);
    double qq = -(b + (b >= 0 ? sq : -sq)) / 2;
    double r1 = qq / a;
    double r2 = (qq != 0) ? c / qq : -r1;
    taus.emplace_back(r1, 1.0);
    if (std::abs(r1 - r2) > 1e-10 * (1 + std::abs(r1))) taus.emplace_back(r2, 1.0);
  }
  std::vector<Direction> out;
  for (auto [t0, t1] : taus) {
    double nrm = std::hypot(t0, t1);
    t0 /= nrm;
    t1 /= nrm;
    double h0 = (t1 * t1 + t0 * t0) * rho0;
    double h1 = (t1 * t1 - t0 * t0) * rho1;
    double h2 = 2 * t0 * t1 * rho1;
    if (h0 * h0 + h1 * h1 + h2 * h2 < 1e-24) continue;
    out.push_back(Direction::from_h(h0, h1, h2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Factorization of the motion quartic
// ---------------------------------------------------------------------------

/// Result of matching lambda*L*F - G against (e1^2+e2^2+e3^2)^2. `mu` is the
/// scalar quotient (affine in p5, vanishing exactly at p5_from_h);
/// `remainder_norm` is the relative norm of the part of the difference that
/// is not proportional to the square of the quadric. `g_scale` is the factor
/// applied to the recovered G so that the ansatz holds with
/// lambda = 2(h0^2+h1^2+h2^2); `gamma_raw` is the measured ratio before
/// scaling.
struct Factorization {
  double mu = 0;
  double remainder_norm = 0;
  double gamma_raw = 0;
  double g_scale = 1;
  HomogPoly3 F, G;  // G in the calibrated scale
};

inline Factorization factorization_check(const DesignParams& dp,
                                         const Direction& h, double p5,
                                         bool throw_on_failure = true) {
  LineSymmetricFrame fr = line_symmetric_frame(dp, h);
  LegParams legs = leg_params(dp);
  legs.p5 = p5;
  HomogPoly3 F = recover_F(dp, legs, fr.n, fr.d);
  HomogPoly3 G = recover_G(dp, legs, fr.n, fr.d);

  HomogPoly3 LF = fr.L.multiplied(F);
  HomogPoly3 Q = HomogPoly3::norm_sq_quadric();
  HomogPoly3 S2 = Q.multiplied(Q);

  // G = gamma * L * F - mu~ * (e^2)^2 in coefficient space.
  Eigen::MatrixXd A(LF.size(), 2);
  A.col(0) = LF.coeffs();
  A.col(1) = -S2.coeffs();
  Eigen::Vector2d x = A.colPivHouseholderQr().solve(G.coeffs());
  const double gamma = x(0);
  const double mu_raw = x(1);
  Eigen::VectorXd resid = G.coeffs() - A * x;

  Factorization out;
  out.gamma_raw = gamma;
  double gnorm = std::max(G.norm(), 1e-12 * std::max(1.0, LF.norm()));
  out.remainder_norm = resid.norm() / gnorm;
  require(std::abs(gamma) > 1e-12 * gnorm / std::max(LF.norm(), 1e-300),
          Errc::division_fails, "L*F component of G is numerically zero");
  out.g_scale = fr.lambda / gamma;
  out.mu = out.g_scale * mu_raw;
  out.F = F;
  out.G = G.scaled(out.g_scale);
  if (throw_on_failure && out.remainder_norm > tolerances().residual) {
    fail(Errc::division_fails, "division by (e1^2+e2^2+e3^2)^2 has remainder");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curve tracing
// ---------------------------------------------------------------------------

namespace detail {

inline Vec3 projective_normalize(Vec3 e) {
  e.normalize();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(e(i)) > 1e-13) {
      if (e(i) < 0) e = -e;
      break;
    }
  }
  return e;
}

inline double projective_distance(const Vec3& a, const Vec3& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

/// Coefficients of the univariate restriction P(S + t*T) by interpolation at
/// small integer parameter values.
inline std::vector<double> line_restriction(const HomogPoly3& P, const Vec3& S,
                                            const Vec3& T) {
  const int deg = P.degree();
  const int m = deg + 1;
  static const double ts[] = {0, 1, -1, 2, -2, 3, -3};
  Eigen::MatrixXd V(m, m);
  Eigen::VectorXd y(m);
  for (int r = 0; r < m; ++r) {
    double t = ts[r];
    double p = 1;
    for (int c = 0; c < m; ++c) {
      V(r, c) = p;
      p *= t;
    }
    y(r) = P.eval(S + t * T);
  }
  Eigen::VectorXd c = V.fullPivLu().solve(y);
  return std::vector<double>(c.data(), c.data() + m);
}

inline Vec3 newton_polish_on_curve(const HomogPoly3& P, Vec3 e) {
  for (int it = 0; it < 4; ++it) {
    double val = P.eval(e);
    Vec3 g = P.gradient(e);
    double g2 = g.squaredNorm();
    if (g2 < 1e-30) break;
    e -= (val / g2) * g;
    e.normalize();
  }
  return e;
}

/// Predictor-corrector walk along P = 0 on the unit sphere, starting next to
/// `seed` in the tangent orientation `dir`. Stops on closure, a singular
/// point, or when the corrector cannot keep the curve residual small.
/// `closed` reports whether the walk came back to (+-) the seed.
inline std::vector<Vec3> continuation_chain(const HomogPoly3& P,
                                            const Vec3& seed, double step,
                                            int max_steps, int dir,
                                            bool& closed) {
  closed = false;
  std::vector<Vec3> pts;
  const double pscale = std::max(1.0, P.max_abs_coeff());
  Vec3 s = seed;
  Vec3 tau = s.cross(P.gradient(s));
  if (tau.norm() < 1e-12) return pts;  // singular seed
  tau = dir * tau.normalized();
  for (int i = 0; i < max_steps; ++i) {
    double hstep = step;
    Vec3 nxt;
    bool ok = false;
    for (int tries = 0; tries < 6; ++tries) {
      nxt = (s + hstep * tau).normalized();
      nxt = newton_polish_on_curve(P, nxt);
      if (std::abs(P.eval(nxt)) <= 1e-9 * pscale &&
          (nxt - s).norm() > 1e-3 * hstep) {
        ok = true;
        break;
      }
      hstep /= 2;
    }
    if (!ok) break;
    Vec3 tau2 = nxt.cross(P.gradient(nxt));
    if (tau2.norm() < 1e-14) break;
    tau2.normalize();
    if (tau2.dot(nxt - s) < 0) tau2 = -tau2;
    s = nxt;
    tau = tau2;
    if (i > 5 && projective_distance(s, seed) < 0.75 * step) {
      closed = true;
      break;
    }
    pts.push_back(projective_normalize(s));
  }
  return pts;
}

inline bool curve_seed_on_axis_line(const HomogPoly3& P, int zero_axis,
                                    Vec3& seed) {
  // Restrict to the coordinate line {e_zero_axis = 0}; coordinates (x, y)
  // with y = 1 plus the boundary point (1, 0).
  int ax = (zero_axis + 1) % 3, ay = (zero_axis + 2) % 3;
  const int deg = P.degree();
  std::vector<double> coeffs(deg + 1, 0.0);
  for (int idx = 0; idx < P.size(); ++idx) {
    auto ex = HomogPoly3::exponents_of(deg, idx);
    if (ex[zero_axis] != 0) continue;
    coeffs[ex[ax]] += P.coeffs()(idx);
  }
  double scale = 0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0) return false;
  if (std::abs(coeffs[deg]) <= 1e-12 * scale) {
    // (1, 0) on the restriction: the pure x^deg monomial vanishes.
    seed = Vec3::Zero();
    seed(ax) = 1;
    return true;
  }
  std::vector<double> roots = real_roots(coeffs);
  if (roots.empty()) return false;
  seed = Vec3::Zero();
  seed(ax) = roots.front();
  seed(ay) = 1;
  return true;
}

}  // namespace detail

/// Traces `count` points of the real projective plane curve P = 0. A seed
/// root is located on a coordinate line, then a pencil of lines through the
/// seed sweeps the curve; the residual polynomial per line (after factoring
/// out the seed) yields the branch points, chained by nearest-neighbor
/// continuity in the projective metric. The sweep is adaptive: a coarse pass
/// brackets the angular windows in which the pencil actually meets the curve
/// (narrow when the curve is nearly straight through the seed), and the
/// refinement concentrates there. Points come back ordered by the sweep
/// parameter, the seed first.
inline std::vector<Vec3> trace_plane_curve(const HomogPoly3& P, int count) {
  require(count >= 1, Errc::precondition, "count must be positive");
  Vec3 seed;
  bool found = detail::curve_seed_on_axis_line(P, 2, seed) ||
               detail::curve_seed_on_axis_line(P, 1, seed) ||
               detail::curve_seed_on_axis_line(P, 0, seed);
  require(found, Errc::no_real_seed,
          "no real point of the curve found on the coordinate lines");
  seed = detail::newton_polish_on_curve(P, seed.normalized());
  seed = detail::projective_normalize(seed);

  // Orthonormal pencil basis.
  Vec3 a = std::abs(seed(2)) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  Vec3 u = seed.cross(a).normalized();
  Vec3 v = seed.cross(u).normalized();

  const double pscale = std::max(1.0, P.max_abs_coeff());
  auto line_points = [&](double theta) {
    Vec3 T = std::cos(theta) * u + std::sin(theta) * v;
    std::vector<double> rc = detail::line_restriction(P, seed, T);
    std::vector<double> residual(rc.begin() + 1, rc.end());  // factor out t = 0
    std::vector<Vec3> pts;
    for (double t : real_roots(residual)) {
      Vec3 cand = detail::projective_normalize(seed + t * T);
      cand = detail::newton_polish_on_curve(P, cand);
      cand = detail::projective_normalize(cand);
      if (std::abs(P.eval(cand)) > 1e-7 * pscale) continue;
      pts.push_back(cand);
    }
    return pts;
  };

  // Coarse pass: which pencil angles meet the curve at all.
  const int coarse = std::max(256, count);
  std::vector<bool> active(coarse, false);
  bool any = false;
  for (int k = 0; k < coarse; ++k) {
    active[k] = !line_points(M_PI * (k + 0.5) / coarse).empty();
    any = any || active[k];
  }

  std::vector<Vec3> accepted;
  if (any) {
    // Active windows, one coarse step of margin on both sides.
    std::vector<std::pair<double, double>> windows;
    const double step = M_PI / coarse;
    int k = 0;
    while (k < coarse) {
      if (!active[k]) {
        ++k;
        continue;
      }
      int kk = k;
      while (kk + 1 < coarse && active[kk + 1]) ++kk;
      windows.emplace_back(std::max(0.0, (k - 0.5) * step),
                           std::min(M_PI, (kk + 1.5) * step));
      k = kk + 1;
    }
    double total = 0;
    for (auto& w : windows) total += w.second - w.first;

    for (int pass = 0; pass < 3 && static_cast<int>(accepted.size()) < count;
         ++pass) {
      accepted.clear();
      accepted.push_back(seed);
      Vec3 prev = seed;
      const int fine = std::max(4 * count, 256) << (2 * pass);
      for (auto& w : windows) {
        int n =
            std::max(8, static_cast<int>(fine * (w.second - w.first) / total));
        for (int i = 0; i < n; ++i) {
          double theta = w.first + (w.second - w.first) * (i + 0.5) / n;
          Vec3 best;
          double best_dist = std::numeric_limits<double>::infinity();
          for (const Vec3& cand : line_points(theta)) {
            double dist = detail::projective_distance(cand, prev);
            if (dist < best_dist) {
              best_dist = dist;
              best = cand;
            }
          }
          if (!std::isfinite(best_dist)) continue;
          if (best_dist < 1e-9) continue;  // rediscovered the previous point
          accepted.push_back(best);
          prev = best;
        }
      }
    }
  }

  if (static_cast<int>(accepted.size()) < count) {
    // The pencil starves when a component of the curve is (nearly) a line
    // through the seed: all other intersections stay complex. Walk the curve
    // locally instead.
    double step = M_PI / std::max(2 * count, 64);
    bool closed_fwd = false, closed_bwd = false;
    std::vector<Vec3> fwd = detail::continuation_chain(P, seed, step, 8 * count,
                                                       +1, closed_fwd);
    accepted.clear();
    if (closed_fwd) {
      accepted.push_back(seed);
      accepted.insert(accepted.end(), fwd.begin(), fwd.end());
    } else {
      std::vector<Vec3> bwd = detail::continuation_chain(P, seed, step,
                                                         8 * count, -1,
                                                         closed_bwd);
      accepted.assign(bwd.rbegin(), bwd.rend());
      accepted.push_back(seed);
      accepted.insert(accepted.end(), fwd.begin(), fwd.end());
    }
  }
  require(static_cast<int>(accepted.size()) >= count, Errc::continuation_stall,
          "curve tracing produced too few distinct points");
  // Evenly thin the sweep-ordered chain down to `count` points.
  std::vector<Vec3> out;
  out.reserve(count);
  const int n = static_cast<int>(accepted.size());
  for (int i = 0; i < count; ++i) {
    int idx = (count == 1) ? 0 : static_cast<int>(std::llround(
                                     double(i) * (n - 1) / (count - 1)));
    out.push_back(accepted[idx]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Motion tracing
// ---------------------------------------------------------------------------

struct TracedMotion {
  DesignParams design;
  LineSymmetricFrame frame;
  LegParams legs;
  HomogPoly3 curve;  // the plane curve swept by (e1:e2:e3)
  std::vector<StudyPose> poses;
};

inline StudyPose pose_on_curve(const DesignParams& dp, const LegParams& legs,
                               const LineSymmetricFrame& fr, const Vec3& e) {
  FSolution fs = solve_f(dp, legs, fr.n, fr.d, e);
  return fs.pose(e).normalized();
}

/// Traces the self-motion fixed by the direction h: p5 is derived from h, the
/// legs follow, and the poses sample the cubic line-symmetry branch of the
/// motion. Every pose has e0 = f0 = 0 and satisfies all five constraints.
inline TracedMotion trace_motion(const DesignParams& dp, const Direction& h,
                                 int count) {
  require(dp.v != 0.0, Errc::precondition,
          "v = 0 designs are traced by trace_motion_special_v0");
  TracedMotion tm;
  tm.design = dp;
  tm.frame = line_symmetric_frame(dp, h);
  tm.legs = legs_with_p5(dp, p5_from_h(dp, h));
  tm.curve = recover_F(dp, tm.legs, tm.frame.n, tm.frame.d);
  std::vector<Vec3> pts = trace_plane_curve(tm.curve, count);
  tm.poses.reserve(pts.size());
  for (const Vec3& e : pts) {
    tm.poses.push_back(pose_on_curve(dp, tm.legs, tm.frame, e));
  }
  return tm;
}

/// Sphere condition of a moving point x against a fixed center X with squared
/// radius r_sq, as a quadratic form in the Study parameters of a pose with
/// e0 = 0. For a normalized valid pose the value equals
/// |R x + s - X|^2 - r_sq; in general it scales with N.
template <typename Scalar>
inline Scalar sphere_condition(const StudyPose& pose, const Vec3T<Scalar>& x,
                               const Vec3T<Scalar>& X, Scalar r_sq) {
  require(std::abs(pose.e0) <= 1e-9 * std::sqrt(pose.norm_sq()),
          Errc::precondition, "sphere condition form assumes e0 = 0");
  const double e1 = pose.e1, e2 = pose.e2, e3 = pose.e3;
  const double f0 = pose.f0, f1 = pose.f1, f2 = pose.f2, f3 = pose.f3;
  const Scalar xx = x(0), yy = x(1), zz = x(2);
  const Scalar XX = X(0), YY = X(1), ZZ = X(2);
  Scalar lam =
      (xx * xx + yy * yy + zz * zz + XX * XX + YY * YY + ZZ * ZZ - r_sq) *
          (e1 * e1 + e2 * e2 + e3 * e3) +
      4 * (f0 * f0 + f1 * f1 + f2 * f2 + f3 * f3);
  lam += -2.0 * (xx * XX - yy * YY - zz * ZZ) * (e1 * e1) +
         2.0 * (xx * XX - yy * YY + zz * ZZ) * (e2 * e2) +
         2.0 * (xx * XX + yy * YY - zz * ZZ) * (e3 * e3);
  lam += -4.0 * (yy * XX + xx * YY) * (e1 * e2) -
         4.0 * (zz * XX + xx * ZZ) * (e1 * e3) -
         4.0 * (zz * YY + yy * ZZ) * (e2 * e3);
  lam += -4.0 * (xx + XX) * (e3 * f2 - e2 * f3) -
         4.0 * (yy + YY) * (e1 * f3 - e3 * f1) -
         4.0 * (zz + ZZ) * (e2 * f1 - e1 * f2);
  lam += 4.0 * (xx - XX) * (e1 * f0) + 4.0 * (yy - YY) * (e2 * f0) +
         4.0 * (zz - ZZ) * (e3 * f0);
  return lam;
}

inline double sphere_condition(const StudyPose& pose, const Vec3& x,
                               const Vec3& X, double r_sq) {
  return sphere_condition<double>(pose, x, X, r_sq);
}

/// Restriction of the leg-1 sphere condition to the f-solved poses: a
/// homogeneous quartic in e (the motion curve of the v = 0 special case).
inline HomogPoly3 recover_sphere_restriction(const DesignParams& dp,
                                             const LegParams& legs,
                                             const LineSymmetricFrame& fr,
                                             double r_sq,
                                             NodeGrid grid = NodeGrid::primary) {
  const Vec3 m1 = fr.n - dp.a_r * fr.d;
  const Vec3 M1(dp.A, 0, dp.C);
  std::vector<Vec3> nodes = quartic_nodes(grid);
  Eigen::VectorXd values(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) {
    FSolution fs = solve_f(dp, legs, fr.n, fr.d, nodes[k]);
    StudyPose pose = fs.pose(nodes[k]);
    values(k) = nodes[k].squaredNorm() *
                sphere_condition(pose, m1, M1, r_sq);
  }
  return HomogPoly3::fit(4, nodes, values);
}

/// Special-case tracer for v = 0 designs: p5 = a4 = a_r is forced, R1 is free
/// and must be chosen so the leg-1 sphere restriction has real points. Any
/// direction h fixes a line-symmetric generation of the same motion.
inline TracedMotion trace_motion_special_v0(const DesignParams& dp,
                                            const Direction& h, double p5,
                                            double r1_sq, int count) {
  double scale = 1 + std::abs(dp.a_r) + std::abs(dp.a4);
  require(std::abs(dp.v) <= 1e-12 * scale, Errc::precondition,
          "design has v != 0");
  require(std::abs(p5 - dp.a_r) <= 1e-9 * scale, Errc::precondition,
          "v = 0 forces p5 = a4 = a_r");
  TracedMotion tm;
  tm.design = dp;
  tm.frame = line_symmetric_frame(dp, h);
  tm.legs = leg_params(dp);
  tm.legs.p5 = p5;
  tm.legs.r1_sq = r1_sq;
  tm.curve = recover_sphere_restriction(dp, tm.legs, tm.frame, r1_sq);
  std::vector<Vec3> pts = trace_plane_curve(tm.curve, count);
  tm.poses.reserve(pts.size());
  for (const Vec3& e : pts) {
    tm.poses.push_back(pose_on_curve(dp, tm.legs, tm.frame, e));
  }
  return tm;
}

// ---------------------------------------------------------------------------
// Leg lengths
// ---------------------------------------------------------------------------

/// The five constant-by-construction leg quantities at a pose: the leg-1
/// sphere distance, the moduli of the two conjugate Darboux offsets, the real
/// Darboux offset, and the distance of the fixed Mannheim point from the
/// displaced Mannheim plane.
inline std::array<double, 5> leg_lengths(const DesignParams& dp,
                                         const LegParams& legs, const Vec3& n,
                                         const Vec3& d, const StudyPose& pose) {
  StudyPose p = pose.normalized();
  Displacement disp = displacement_from_pose(p);
  Mat3 R;
  Vec3 s;
  detail::study_quadratic_forms(p, R, s);
  const double N = p.norm_sq();

  std::array<double, 5> l{};
  const Vec3 m1 = n - dp.a_r * d;
  l[0] = (disp.apply<double>(m1) - Vec3(dp.A, 0, dp.C)).norm();

  Vec3c m2, m3;
  for (int i = 0; i < 3; ++i) {
    m2(i) = Complex(n(i), dp.a_c * d(i));
    m3(i) = std::conj(m2(i));
  }
  auto crow = [&R](int r, const Vec3c& m) {
    return R(r, 0) * m(0) + R(r, 1) * m(1) + R(r, 2) * m(2);
  };
  const Complex i1(0, 1);
  Complex off2 = ((s(0) + crow(0, m2)) - i1 * (s(1) + crow(1, m2))) / N;
  Complex off3 = ((s(0) + crow(0, m3)) + i1 * (s(1) + crow(1, m3))) / N;
  l[1] = std::abs(off2);
  l[2] = std::abs(off3);
  const Vec3 m4 = n + (dp.a4 - dp.a_r) * d;
  l[3] = (s(2) + R.row(2).dot(m4)) / N;
  const Vec3 p5vec = n + (legs.p5 - dp.a_r) * d;
  l[4] = std::abs((disp.R * d).dot(disp.apply<double>(p5vec)));
  return l;
}

}  // namespace pentamotion
