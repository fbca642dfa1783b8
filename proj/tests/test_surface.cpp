#include <doctest.h>

#include <random>

#include "pentamotion/surface.hpp"
#include "pentamotion/verify.hpp"

using namespace pentamotion;

namespace {

const TracedMotion& reference_motion() {
  static TracedMotion tm = trace_motion(reference_design(),
                                        reference_direction(), 50);
  return tm;
}

}  // namespace

TEST_CASE("generators satisfy the line conditions") {
  const TracedMotion& tm = reference_motion();
  std::vector<Generator> gens = generators(tm);
  REQUIRE(gens.size() == tm.poses.size());
  for (size_t i = 0; i < gens.size(); ++i) {
    CHECK(std::abs(gens[i].line.plucker_residual()) <= 1e-10);
    CHECK(std::abs(tm.curve.eval(gens[i].line.direction)) <= 1e-9);
    CHECK((gens[i].pedal - gens[i].line.pedal()).norm() <= 1e-12);
    CHECK(std::abs(gens[i].pedal.dot(gens[i].line.direction)) <= 1e-10);
    // Half-turn about the generator reproduces the pose's displacement.
    Displacement d = displacement_from_pose(tm.poses[i]);
    Vec3 x(0.3, -0.7, 1.1);
    CHECK((d.apply<double>(x) - reflect_in_line(gens[i].line, x)).norm() <= 1e-9);
  }
}

TEST_CASE("ruled patch rows lie on their generators") {
  const TracedMotion& tm = reference_motion();
  RuledPatch patch = sample_basic_surface(tm, -10, 10, 10);
  for (size_t i = 0; i < patch.gens.size(); ++i) {
    for (size_t j = 0; j < patch.points[i].size(); ++j) {
      Vec3 rel = patch.points[i][j] - patch.gens[i].pedal;
      CHECK((rel - rel.dot(patch.gens[i].line.direction) *
                       patch.gens[i].line.direction).norm() <= 1e-10);
    }
  }
}

TEST_CASE("gamma ranges shift consistently") {
  const TracedMotion& tm = reference_motion();
  RuledPatch a = sample_basic_surface(tm, -5, 5, 11);
  RuledPatch b = sample_basic_surface(tm, -2, 8, 11);
  for (size_t i = 0; i < a.gens.size(); ++i) {
    for (size_t j = 0; j < a.points[i].size(); ++j) {
      Vec3 shifted = a.points[i][j] + 3.0 * a.gens[i].line.direction;
      CHECK((shifted - b.points[i][j]).norm() <= 1e-10);
    }
  }
}

TEST_CASE("sampled surface satisfies the reference quintic") {
  const TracedMotion& tm = reference_motion();
  RuledPatch patch = sample_basic_surface(tm, -10, 10, 20);
  std::vector<Vec3> pts;
  for (const auto& row : patch.points)
    for (const Vec3& p : row) pts.push_back(p);
  ResidualStats st = quintic_residual(pts);
  CHECK(st.max <= 1e-6);
  CHECK(reference_quintic_value(Vec3::Zero()) == 46930000.0);
}

TEST_CASE("points off the surface fail the quintic by a wide margin") {
  const TracedMotion& tm = reference_motion();
  std::vector<Generator> gens = generators(tm);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const Generator& g = gens[k % gens.size()];
    Vec3 off(gauss(rng), gauss(rng), gauss(rng));
    off -= off.dot(g.line.direction) * g.line.direction;
    off.normalize();
    Vec3 p = g.pedal + 0.7 * g.line.direction + off;  // distance ~1 sideways
    double r = std::abs(reference_quintic_value(p)) /
               std::max(reference_quintic_gradient(p).norm(), 1e-9);
    CHECK(r > 1e-3);
  }
}

TEST_CASE("a generic line meets the quintic in at most five real points") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 base(gauss(rng), gauss(rng), gauss(rng));
    Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
    if (dir.norm() < 0.1) continue;
    dir.normalize();
    // Degree-5 restriction recovered from six samples.
    Eigen::MatrixXd V(6, 6);
    Eigen::VectorXd y(6);
    for (int r = 0; r < 6; ++r) {
      double t = r - 2.5;
      double p = 1;
      for (int c = 0; c < 6; ++c) {
        V(r, c) = p;
        p *= t;
      }
      y(r) = reference_quintic_value(base + t * dir);
    }
    Eigen::VectorXd cf = V.fullPivLu().solve(y);
    std::vector<double> coeffs(cf.data(), cf.data() + 6);
    CHECK(real_roots(coeffs).size() <= 5);
  }
}

TEST_CASE("reflected configuration behaves like the mirror construction") {
  const TracedMotion& tm = reference_motion();
  std::vector<double> ts = {-3, -1, 0, 1, 2.5, 69.0 / 20, 5, 6.1, 8, 10};
  ReflectedConfig rc = krames_reflect(tm, 20, ts);
  CHECK(!rc.borel_special);
  REQUIRE(rc.P_bar_samples.size() == ts.size());

  // Reflecting back recovers the sphere-center samples.
  for (size_t i = 0; i < ts.size(); ++i) {
    Vec3 back = reflect_in_line(rc.generator.line, rc.P_bar_samples[i]);
    CHECK((back - sigma_P(tm.design, ts[i])).norm() <= 1e-10);
  }

  // The reflected curve points run on spheres centered on the reflected line.
  for (size_t i = 0; i < ts.size(); ++i) {
    Vec3 moving = sigma_P(tm.design, ts[i]);
    std::vector<Vec3> traj;
    for (const StudyPose& p : tm.poses) {
      traj.push_back(displacement_from_pose(p).apply<double>(moving));
    }
    SphereFit<double> fit = fit_sphere(traj);
    CHECK(fit.rms_residual <= 1e-8);
    CHECK(rc.p_bar.distance_to(fit.center) <= 1e-8);
    // The stored sample is the trajectory's snapshot at the chosen pose.
    Vec3 at_pose = displacement_from_pose(tm.poses[20]).apply<double>(moving);
    CHECK((at_pose - rc.P_bar_samples[i]).norm() <= 1e-9);
  }

  // The planar trajectory of the platform point at t = a4 stays in z = p4.
  Vec3 m4 = tm.frame.n + (tm.design.a4 - tm.design.a_r) * tm.frame.d;
  for (const StudyPose& p : tm.poses) {
    Vec3 img = displacement_from_pose(p).apply<double>(m4);
    CHECK(std::abs(img(2) - 100.0 / 41) <= 1e-8);
  }
}

TEST_CASE("general-point trajectories never cross a plane more than six times") {
  // Degree evidence for the trajectories: a plane meets an algebraic curve of
  // degree six in at most six real points; sign changes along the sampled
  // path witness crossings.
  DesignParams d = reference_design();
  TracedMotion tm = trace_motion(d, reference_direction(), 400);
  Vec3 x(0.37, -1.21, 0.83);
  std::vector<Vec3> traj;
  for (const StudyPose& p : tm.poses) {
    traj.push_back(displacement_from_pose(p).apply<double>(x));
  }
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 nrm(gauss(rng), gauss(rng), gauss(rng));
    if (nrm.norm() < 0.1) continue;
    nrm.normalize();
    double off = gauss(rng);
    int changes = 0;
    double prev = nrm.dot(traj[0]) - off;
    for (size_t k = 1; k < traj.size(); ++k) {
      double cur = nrm.dot(traj[k]) - off;
      if (prev * cur < 0) ++changes;
      if (cur != 0) prev = cur;
    }
    CHECK(changes <= 6);
  }
}

TEST_CASE("known special directions raise the flag") {
  DesignParams d = reference_design();
  TracedMotion tm = trace_motion(d, Direction::from_h(1, 0, 0), 30);
  ReflectedConfig rc = krames_reflect(tm, 5, {0.0, 1.0});
  CHECK(rc.borel_special);
  TracedMotion tm0 = trace_motion(d, Direction::from_h(0, 1, 0.5), 30);
  ReflectedConfig rc0 = krames_reflect(tm0, 5, {0.0, 1.0});
  CHECK(rc0.borel_special);
}

TEST_CASE("reference example matcher") {
  CHECK(matches_reference_example(reference_design(), reference_direction()));
  CHECK(matches_reference_example(reference_design(),
                                  Direction::from_h(2, 3, 1)));
  CHECK(!matches_reference_example(reference_design(),
                                   Direction::from_h(1, 0, 0)));
  CHECK(!matches_reference_example(classify(1, 0, 1, 1, 0),
                                   reference_direction()));
}
