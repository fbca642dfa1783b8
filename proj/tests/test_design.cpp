#include <doctest.h>

#include <random>

#include "pentamotion/design.hpp"

using namespace pentamotion;

TEST_CASE("classification of the worked Type 1 design") {
  DesignParams d = classify(-1, -5, 7, 4, 2);
  CHECK(d.ptype == PentapodType::type1);
  CHECK(d.v == doctest::Approx(10.0));
  CHECK(d.w == doctest::Approx(61.0));
}

TEST_CASE("classification edge cases") {
  CHECK(classify(1, 0, 1, 1, 0).ptype == PentapodType::type2);
  CHECK_THROWS_AS(classify(1, -5, 7, 4, 0), Error);  // a4 = 0 but C != 0
  CHECK_THROWS_AS(classify(1, 0, 7, 4, 2), Error);   // C = 0 but a4 != 0
  CHECK_THROWS_AS(classify(0, -5, 7, 4, 2), Error);  // A = 0
  CHECK_THROWS_AS(classify(1, -5, 7, 0, 2), Error);  // a_c = 0
  try {
    classify(1, -5, 7, 4, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_type);
  }
}

TEST_CASE("classification is scale covariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.2, 3.0);
  DesignParams base = classify(-1, -5, 7, 4, 2);
  for (int k = 0; k < 1000; ++k) {
    double kappa = U(rng);
    DesignParams s = classify(kappa * base.A, kappa * base.C, kappa * base.a_r,
                              kappa * base.a_c, kappa * base.a4);
    CHECK(s.ptype == base.ptype);
    CHECK(s.v == doctest::Approx(kappa * base.v));
    CHECK(s.w == doctest::Approx(kappa * kappa * base.w));
  }
}

TEST_CASE("Darboux offsets of the worked design") {
  DesignParams d = classify(-1, -5, 7, 4, 2);
  LegParams lp = leg_params(d);
  CHECK(lp.p2.real() == doctest::Approx(-2230.0 / 1681).epsilon(1e-14));
  CHECK(lp.p2.imag() == doctest::Approx(-2440.0 / 1681).epsilon(1e-14));
  CHECK(lp.p3 == std::conj(lp.p2));
  CHECK(lp.p4 == doctest::Approx(100.0 / 41).epsilon(1e-14));
}

TEST_CASE("Type 2 designs have p4 = 0") {
  DesignParams d = classify(1, 0, 1.3, 0.7, 0);
  CHECK(leg_params(d).p4 == 0.0);
}

TEST_CASE("leg condition ties p5 and R1") {
  DesignParams d = classify(-1, -5, 7, 4, 2);
  double r1_sq = r1_sq_from_p5(d, 6.0);
  CHECK(r1_sq == doctest::Approx(927514.0 / 8405).epsilon(1e-14));
  CHECK(std::abs(leg_condition_residual(d, 6.0, r1_sq)) <= 1e-8);
  CHECK(p5_from_r1_sq(d, r1_sq) == doctest::Approx(6.0).epsilon(1e-13));

  double p5 = 527538.0 / 82369;
  double r2 = r1_sq_from_p5(d, p5);
  CHECK(std::abs(leg_condition_residual(d, p5, r2)) <= 1e-8);
}

TEST_CASE("leg condition round trip on random designs") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-4, 4);
  int done = 0;
  while (done < 1000) {
    double A = U(rng), C = U(rng), ar = U(rng), ac = U(rng), a4 = U(rng);
    if (A == 0 || ac == 0 || C == 0 || a4 == 0) continue;
    DesignParams d = classify(A, C, ar, ac, a4);
    if (d.v == 0 || d.w == 0) continue;
    double p5 = U(rng);
    double r1_sq = r1_sq_from_p5(d, p5);
    double scale = 1 + std::abs(r1_sq) + d.q() * d.q();
    CHECK(std::abs(leg_condition_residual(d, p5, r1_sq)) <= 1e-12 * scale * scale);
    CHECK(std::abs(p5_from_r1_sq(d, r1_sq) - p5) <= 1e-9 * (1 + std::abs(p5)));
    ++done;
  }
}

TEST_CASE("v = 0 makes the leg condition degenerate") {
  DesignParams d = classify(-1, -5, 2, 4, 2);
  CHECK(d.v == 0.0);
  CHECK_THROWS_AS(r1_sq_from_p5(d, 1.0), Error);
  try {
    r1_sq_from_p5(d, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::special_case_v0);
  }
}

TEST_CASE("anchor points") {
  DesignParams d = classify(-1, -5, 7, 4, 2);
  Direction h = Direction::from_h(1, 1.5, 0.5);
  AnchorSet a = anchors(d, Vec3::Zero(), h);
  CHECK((a.M1 - Vec3(-1, 0, -5)).norm() == 0.0);
  CHECK(a.M5.norm() == 0.0);
  CHECK((a.m1 + 7 * h.d).norm() <= 1e-15);
  CHECK((a.m4 + 5 * h.d).norm() <= 1e-15);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.m3(i) == std::conj(a.m2(i)));
    CHECK(a.m2(i).imag() == doctest::Approx(4 * h.d(i)));
  }
  CHECK(a.M2(1) == Complex(0, 1));
  CHECK(a.M3(1) == Complex(0, -1));
  CHECK((a.m5_dir - h.d).norm() == 0.0);
}
