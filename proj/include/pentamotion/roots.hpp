#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pentamotion/common.hpp"

namespace pentamotion {

/// Roots of sum_k c[k] x^k via companion-matrix eigenvalues. Leading
/// coefficients that are negligible relative to the largest one are dropped
/// (the polynomial degenerates to lower degree).
template <typename Scalar>
inline std::vector<Complex> poly_roots_impl(std::vector<Scalar> c) {
  double scale = 0;
  for (const auto& x : c) scale = std::max(scale, std::abs(x));
  if (scale == 0) return {};
  int deg = static_cast<int>(c.size()) - 1;
  while (deg > 0 && std::abs(c[deg]) <= 1e-13 * scale) --deg;
  if (deg <= 0) return {};
  using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  CMat companion = CMat::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -Complex(c[i]) / Complex(c[deg]);
  }
  Eigen::ComplexEigenSolver<CMat> es(companion, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

inline std::vector<Complex> poly_roots(const std::vector<double>& coeffs) {
  return poly_roots_impl<double>(coeffs);
}

inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs) {
  return poly_roots_impl<Complex>(coeffs);
}

inline Complex poly_eval(const std::vector<double>& c, Complex x) {
  Complex r = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) r = r * x + c[i];
  return r;
}

inline double poly_eval(const std::vector<double>& c, double x) {
  double r = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) r = r * x + c[i];
  return r;
}

/// Real roots with a couple of Newton polish steps. `imag_tol` is relative to
/// 1 + |Re|.
inline std::vector<double> real_roots(const std::vector<double>& coeffs,
                                      double imag_tol = 1e-8) {
  std::vector<double> out;
  std::vector<double> dc;
  for (size_t i = 1; i < coeffs.size(); ++i) dc.push_back(coeffs[i] * i);
  for (const Complex& z : poly_roots(coeffs)) {
    if (std::abs(z.imag()) > imag_tol * (1 + std::abs(z.real()))) continue;
    double x = z.real();
    for (int it = 0; it < 3; ++it) {
      double f = poly_eval(coeffs, x);
      double df = poly_eval(dc, x);
      if (df == 0) break;
      double step = f / df;
      if (!std::isfinite(step)) break;
      x -= step;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pentamotion
