#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pentamotion {

inline constexpr const char* kVersion = "0.1.0";

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
using Vec3c = Vec3T<Complex>;

/// Global numeric tolerances. `residual` bounds algebraic residuals of
/// predicates that are exactly zero in exact arithmetic, `leg_drift` bounds
/// the relative drift of leg lengths along a motion.
struct Tolerances {
  double residual = 1e-9;
  double leg_drift = 1e-8;
};

inline Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

enum class Errc {
  zero_norm,
  not_line_symmetric,
  all_zero,
  invalid_design,
  unsupported_type,
  special_case_v0,
  singular_system,
  rank_deficiency,
  degenerate_direction,
  division_fails,
  no_real_seed,
  continuation_stall,
  ideal_point,
  circle_case,
  degenerate_fit,
  trace_failure,
  precondition,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::zero_norm: return "ZeroNorm";
    case Errc::not_line_symmetric: return "NotLineSymmetric";
    case Errc::all_zero: return "AllZero";
    case Errc::invalid_design: return "InvalidDesign";
    case Errc::unsupported_type: return "UnsupportedType";
    case Errc::special_case_v0: return "SpecialCaseV0";
    case Errc::singular_system: return "SingularSystem";
    case Errc::rank_deficiency: return "RankDeficiency";
    case Errc::degenerate_direction: return "DegenerateDirection";
    case Errc::division_fails: return "DivisionFails";
    case Errc::no_real_seed: return "NoRealSeed";
    case Errc::continuation_stall: return "ContinuationStall";
    case Errc::ideal_point: return "IdealPoint";
    case Errc::circle_case: return "CircleCase";
    case Errc::degenerate_fit: return "Degenerate";
    case Errc::trace_failure: return "TraceFailure";
    case Errc::precondition: return "Precondition";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace pentamotion
