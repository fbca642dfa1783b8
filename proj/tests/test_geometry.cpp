#include <doctest.h>

#include <random>

#include "pentamotion/geometry.hpp"
#include "pentamotion/surface.hpp"
#include "pentamotion/verify.hpp"

using namespace pentamotion;

namespace {
DesignParams design_E() { return classify(-1, -5, 7, 4, 2); }
}

TEST_CASE("sphere-center curve endpoints") {
  DesignParams d = design_E();
  CHECK((sigma_P(d, 0.0) - Vec3(-1, 0, -5)).norm() <= 1e-14);  // M1
  CHECK(sigma_P(d, std::numeric_limits<double>::infinity()).norm() == 0.0);  // M5
  Vec3 p = sigma_P(d, 69.0 / 20);
  CHECK(p(0) == doctest::Approx(-40.85 / 28.6025).epsilon(1e-13));
  CHECK(p(1) == doctest::Approx(13.8 / 28.6025).epsilon(1e-13));
  CHECK(p(2) == doctest::Approx(200.0 / 29).epsilon(1e-13));
  CHECK_THROWS_AS(sigma_P(d, 2.0), Error);  // t = a4 is ideal
}

TEST_CASE("sigma endpoint identities hold for random designs") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-4, 4);
  int done = 0;
  while (done < 1000) {
    double A = U(rng), C = U(rng), ar = U(rng), ac = U(rng), a4 = U(rng);
    if (A == 0 || ac == 0 || C == 0 || a4 == 0) continue;
    DesignParams d = classify(A, C, ar, ac, a4);
    CHECK((sigma_P(d, 0.0) - Vec3(d.A, 0, d.C)).norm() <= 1e-12);
    CHECK(sigma_P(d, std::numeric_limits<double>::infinity()).norm() == 0.0);
    ++done;
  }
}

TEST_CASE("common center of the ellipsoid family") {
  DesignParams d = design_E();
  CenterPoint cp = center_point(d);
  CHECK(!cp.infinite);
  CHECK(cp.c == doctest::Approx(6.1).epsilon(1e-14));
  CHECK(cp.C(0) == doctest::Approx(-1.32659).epsilon(1e-5));
  CHECK(cp.C(1) == doctest::Approx(1.45152).epsilon(1e-5));
  CHECK(cp.C(2) == doctest::Approx(2.43902).epsilon(1e-5));
  // The center height equals the Darboux offset p4.
  CHECK(cp.C(2) == doctest::Approx(leg_params(d).p4).epsilon(1e-13));

  DesignParams v0 = classify(-1, -5, 2, 4, 2);  // a_r = a4
  CenterPoint cp0 = center_point(v0);
  CHECK(cp0.infinite);
  CHECK(cp0.C.norm() == 0.0);
}

TEST_CASE("ellipsoid of rotation for the worked example") {
  DesignParams d = design_E();
  Ellipsoid e = ellipsoid_for(d, 69.0 / 20);
  CHECK(e.vertex_half_length == doctest::Approx(29.0 / 20).epsilon(1e-14));
  CHECK(e.equator_radius == doctest::Approx(std::sqrt(11441.0) / 20).epsilon(1e-14));
  CHECK(!e.degenerate_disc);

  Ellipsoid disc = ellipsoid_for(d, 2.0);
  CHECK(disc.degenerate_disc);
  CHECK(disc.center(2) == doctest::Approx(100.0 / 41).epsilon(1e-13));

  Ellipsoid sphere = ellipsoid_for(d, 6.1);
  CHECK(sphere.vertex_half_length == doctest::Approx(4.1).epsilon(1e-13));
  CHECK(sphere.equator_radius == doctest::Approx(4.1).epsilon(1e-13));
}

TEST_CASE("locus points lie on the ellipsoid") {
  DesignParams d = design_E();
  for (double t : {0.0, 69.0 / 20, 6.1}) {
    Ellipsoid el = ellipsoid_for(d, t);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        double h1 = -2 + 4.0 * i / 7, h2 = -2 + 4.0 * j / 7;
        if (h1 == 0 && h2 == 0) continue;
        Vec3 img = locus_point(d, Direction::from_h(1, h1, h2), t);
        CHECK(std::abs(el.implicit_residual(img)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("locus for t = a4 stays in the Darboux plane") {
  DesignParams d = design_E();
  for (int i = 0; i < 8; ++i) {
    double h1 = -1.5 + 3.0 * i / 7;
    Vec3 img = locus_point(d, Direction::from_h(1, h1, 0.9), 2.0);
    CHECK(std::abs(img(2) - 100.0 / 41) <= 1e-9);
  }
}

TEST_CASE("two directions with different p5 share the ellipsoid") {
  DesignParams d = design_E();
  Ellipsoid a = ellipsoid_for(d, 1.25);
  Direction h1 = Direction::from_h(1, 0.3, 0.4), h2 = Direction::from_h(1, -1.1, 0.2);
  CHECK(std::abs(p5_from_h(d, h1) - p5_from_h(d, h2)) > 1e-3);
  CHECK(std::abs(a.implicit_residual(locus_point(d, h1, 1.25))) <= 1e-8);
  CHECK(std::abs(a.implicit_residual(locus_point(d, h2, 1.25))) <= 1e-8);
}

TEST_CASE("locus rejects h1 = h2 = 0") {
  CHECK_THROWS_AS(locus_point(design_E(), Direction::from_h(1, 0, 0), 1.0), Error);
}

TEST_CASE("trajectories live on the ellipsoid-sphere intersection") {
  DesignParams d = design_E();
  Direction h = Direction::from_h(1, 1.5, 0.5);
  TracedMotion tm = trace_motion(d, h, 50);
  for (double t : {0.0, 69.0 / 20, 6.1}) {
    Vec3 pt = tm.frame.n + (t - d.a_r) * tm.frame.d;
    Vec3 Pt = sigma_P(d, t);
    Ellipsoid el = ellipsoid_for(d, t);
    double r0 = -1;
    for (const StudyPose& pose : tm.poses) {
      Vec3 img = displacement_from_pose(pose).apply<double>(pt);
      CHECK(std::abs(el.implicit_residual(img)) <= 1e-8);
      double r = (img - Pt).norm();
      if (r0 < 0) r0 = r;
      CHECK(std::abs(r - r0) <= 1e-8 * std::max(1.0, r0));
    }
  }
}

TEST_CASE("type 2 sphere centers stay in the base plane") {
  DesignParams d = classify(1, 0, 1, 1, 0);
  for (double t : {-3.0, -1.0, 0.5, 2.0, 10.0}) {
    CHECK(sigma_P(d, t)(2) == 0.0);
  }
}
