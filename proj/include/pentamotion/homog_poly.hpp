#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "pentamotion/common.hpp"

namespace pentamotion {

/// Homogeneous trivariate polynomial of small degree by dense coefficient
/// table. Monomials x^i y^j z^k with i + j + k = degree are ordered by i
/// descending, then j descending. Coefficients are kept in whatever scale
/// they were produced in; use normalized() for proportionality comparisons.
class HomogPoly3 {
 public:
  HomogPoly3() : degree_(0), c_(Eigen::VectorXd::Zero(1)) {}

  explicit HomogPoly3(int degree)
      : degree_(degree), c_(Eigen::VectorXd::Zero(term_count(degree))) {}

  static int term_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(c_.size()); }

  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }

  static int index_of(int degree, int i, int j) {
    // i runs degree..0; for fixed i, j runs (degree - i)..0.
    int idx = 0;
    for (int ii = degree; ii > i; --ii) idx += degree - ii + 1;
    idx += (degree - i) - j;
    return idx;
  }

  static std::array<int, 3> exponents_of(int degree, int index) {
    for (int i = degree; i >= 0; --i) {
      int block = degree - i + 1;
      if (index < block) {
        int j = (degree - i) - index;
        return {i, j, degree - i - j};
      }
      index -= block;
    }
    return {0, 0, 0};
  }

  double coeff(int i, int j, int k) const {
    (void)k;
    return c_(index_of(degree_, i, j));
  }
  void set_coeff(int i, int j, int k, double value) {
    (void)k;
    c_(index_of(degree_, i, j)) = value;
  }

  double eval(const Vec3& e) const {
    double sum = 0;
    for (int idx = 0; idx < size(); ++idx) {
      auto [i, j, k] = exponents_of(degree_, idx);
      sum += c_(idx) * ipow(e(0), i) * ipow(e(1), j) * ipow(e(2), k);
    }
    return sum;
  }

  Vec3 gradient(const Vec3& e) const {
    Vec3 g = Vec3::Zero();
    for (int idx = 0; idx < size(); ++idx) {
      auto [i, j, k] = exponents_of(degree_, idx);
      double c = c_(idx);
      if (i > 0) g(0) += c * i * ipow(e(0), i - 1) * ipow(e(1), j) * ipow(e(2), k);
      if (j > 0) g(1) += c * j * ipow(e(0), i) * ipow(e(1), j - 1) * ipow(e(2), k);
      if (k > 0) g(2) += c * k * ipow(e(0), i) * ipow(e(1), j) * ipow(e(2), k - 1);
    }
    return g;
  }

  double norm() const { return c_.norm(); }

  double max_abs_coeff() const {
    return size() ? c_.cwiseAbs().maxCoeff() : 0.0;
  }

  /// Unit coefficient norm, first nonzero entry positive.
  HomogPoly3 normalized() const {
    HomogPoly3 p = *this;
    double n = p.c_.norm();
    require(n > 0, Errc::zero_norm, "normalizing the zero polynomial");
    p.c_ /= n;
    for (int i = 0; i < p.size(); ++i) {
      if (std::abs(p.c_(i)) > 1e-13) {
        if (p.c_(i) < 0) p.c_ = -p.c_;
        break;
      }
    }
    return p;
  }

  HomogPoly3 scaled(double s) const {
    HomogPoly3 p = *this;
    p.c_ *= s;
    return p;
  }

  /// Product with another homogeneous polynomial (used for L * F and the
  /// powers of e1^2 + e2^2 + e3^2).
  HomogPoly3 multiplied(const HomogPoly3& other) const {
    HomogPoly3 r(degree_ + other.degree_);
    for (int a = 0; a < size(); ++a) {
      if (c_(a) == 0) continue;
      auto [i1, j1, k1] = exponents_of(degree_, a);
      for (int b = 0; b < other.size(); ++b) {
        if (other.c_(b) == 0) continue;
        auto [i2, j2, k2] = exponents_of(other.degree_, b);
        r.c_(index_of(r.degree_, i1 + i2, j1 + j2)) += c_(a) * other.c_(b);
      }
    }
    return r;
  }

  static HomogPoly3 linear(const Vec3& l) {
    HomogPoly3 p(1);
    p.set_coeff(1, 0, 0, l(0));
    p.set_coeff(0, 1, 0, l(1));
    p.set_coeff(0, 0, 1, l(2));
    return p;
  }

  /// e1^2 + e2^2 + e3^2.
  static HomogPoly3 norm_sq_quadric() {
    HomogPoly3 p(2);
    p.set_coeff(2, 0, 0, 1);
    p.set_coeff(0, 2, 0, 1);
    p.set_coeff(0, 0, 2, 1);
    return p;
  }

  /// Least-squares fit of a homogeneous polynomial to sampled values; the
  /// sample set must make the Vandermonde system full rank.
  static HomogPoly3 fit(int degree, const std::vector<Vec3>& nodes,
                        const Eigen::VectorXd& values) {
    const int m = term_count(degree);
    require(static_cast<int>(nodes.size()) >= m, Errc::rank_deficiency,
            "too few interpolation nodes");
    Eigen::MatrixXd V(nodes.size(), m);
    for (size_t r = 0; r < nodes.size(); ++r) {
      for (int idx = 0; idx < m; ++idx) {
        auto [i, j, k] = exponents_of(degree, idx);
        V(r, idx) = ipow(nodes[r](0), i) * ipow(nodes[r](1), j) *
                    ipow(nodes[r](2), k);
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    require(qr.rank() == m, Errc::rank_deficiency,
            "interpolation system is rank deficient");
    HomogPoly3 p(degree);
    p.c_ = qr.solve(values);
    return p;
  }

 private:
  static double ipow(double x, int n) {
    double r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  int degree_;
  Eigen::VectorXd c_;
};

}  // namespace pentamotion
