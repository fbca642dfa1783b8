#include <doctest.h>

#include <random>

#include "pentamotion/homog_poly.hpp"
#include "pentamotion/roots.hpp"

using namespace pentamotion;

TEST_CASE("companion-matrix roots of a real quartic") {
  // (x - 1)(x + 2)(x - 3)(x + 0.5) = x^4 - 1.5x^3 - 6.25x^2 + 8.25x - 3 ... build by convolution
  std::vector<double> c = {1};
  for (double r : {1.0, -2.0, 3.0, -0.5}) {
    std::vector<double> nc(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      nc[i] += c[i] * (-r);
      nc[i + 1] += c[i];
    }
    c = nc;
  }
  std::vector<double> roots = real_roots(c);
  REQUIRE(roots.size() == 4);
  CHECK(roots[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(roots[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[3] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("complex-coefficient cubic roots") {
  // roots 1+i, -2, 3i: p(x) = (x - (1+i))(x + 2)(x - 3i)
  std::vector<Complex> c = {Complex(1, 0)};
  for (Complex r : {Complex(1, 1), Complex(-2, 0), Complex(0, 3)}) {
    std::vector<Complex> nc(c.size() + 1, Complex(0, 0));
    for (size_t i = 0; i < c.size(); ++i) {
      nc[i] += c[i] * (-r);
      nc[i + 1] += c[i];
    }
    c = nc;
  }
  std::vector<Complex> roots = poly_roots(c);
  REQUIRE(roots.size() == 3);
  for (Complex want : {Complex(1, 1), Complex(-2, 0), Complex(0, 3)}) {
    double best = 1e300;
    for (Complex got : roots) best = std::min(best, std::abs(got - want));
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("degenerate leading coefficients are dropped") {
  std::vector<double> c = {-2, 1, 0, 0};  // really x - 2
  std::vector<double> roots = real_roots(c);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(2.0));
}

TEST_CASE("homogeneous polynomial indexing round trip") {
  for (int deg : {1, 2, 3, 4, 5}) {
    int n = HomogPoly3::term_count(deg);
    for (int idx = 0; idx < n; ++idx) {
      auto [i, j, k] = HomogPoly3::exponents_of(deg, idx);
      CHECK(i + j + k == deg);
      CHECK(HomogPoly3::index_of(deg, i, j) == idx);
    }
  }
  CHECK(HomogPoly3::term_count(3) == 10);
  CHECK(HomogPoly3::term_count(4) == 15);
}

TEST_CASE("fit recovers random polynomials exactly") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int deg = 3 + (trial % 2);
    HomogPoly3 p(deg);
    for (int i = 0; i < p.size(); ++i) p.coeffs()(i) = gauss(rng);
    std::vector<Vec3> nodes;
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) nodes.emplace_back(i, j, 1);
    nodes.emplace_back(1, 0, 0);
    nodes.emplace_back(0, 1, 0);
    nodes.emplace_back(1, 1, 0);
    nodes.emplace_back(1, -1, 0);
    Eigen::VectorXd vals(nodes.size());
    for (size_t k = 0; k < nodes.size(); ++k) vals(k) = p.eval(nodes[k]);
    HomogPoly3 q = HomogPoly3::fit(deg, nodes, vals);
    CHECK((q.coeffs() - p.coeffs()).norm() <= 1e-11 * p.norm());
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  HomogPoly3 p(4);
  for (int i = 0; i < p.size(); ++i) p.coeffs()(i) = gauss(rng);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 x(gauss(rng), gauss(rng), gauss(rng));
    Vec3 g = p.gradient(x);
    double h = 1e-6;
    for (int a = 0; a < 3; ++a) {
      Vec3 xp = x, xm = x;
      xp(a) += h;
      xm(a) -= h;
      double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
      CHECK(std::abs(fd - g(a)) <= 1e-6 * (1 + std::abs(g(a))));
    }
  }
}

TEST_CASE("polynomial product evaluates to the product of values") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  HomogPoly3 a(1), b(3);
  for (int i = 0; i < a.size(); ++i) a.coeffs()(i) = gauss(rng);
  for (int i = 0; i < b.size(); ++i) b.coeffs()(i) = gauss(rng);
  HomogPoly3 ab = a.multiplied(b);
  CHECK(ab.degree() == 4);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 x(gauss(rng), gauss(rng), gauss(rng));
    CHECK(ab.eval(x) == doctest::Approx(a.eval(x) * b.eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("normalization fixes scale and sign") {
  HomogPoly3 p(2);
  p.set_coeff(2, 0, 0, -2);
  p.set_coeff(0, 2, 0, -4);
  HomogPoly3 n = p.normalized();
  CHECK(n.norm() == doctest::Approx(1.0));
  CHECK(n.coeff(2, 0, 0) > 0);
  HomogPoly3 scaled = p.scaled(-17.0);
  CHECK((scaled.normalized().coeffs() - n.coeffs()).norm() <= 1e-15);
}
