#include <doctest.h>

#include <cmath>

#include <spinberry/random.hpp>
#include <spinberry/spin_param.hpp>

using namespace spinberry;

TEST_CASE("spherical angles of a symmetric diagonal direction") {
  const Vec3d s = Vec3d(1.0, 1.0, 1.0) / std::sqrt(3.0);
  const auto a = angles_from_spin(s);
  CHECK(std::abs(a.theta - 0.9553166181245093) < 1e-15);
  CHECK(std::abs(a.phi - kPi / 4) < 1e-15);
  CHECK_THROWS_AS(angles_from_spin(Vec3d::Zero().eval()), ZeroSpinVector);
}

TEST_CASE("spinor carries back the direction it was built from") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Vec3d s = rng.unit_sphere();
    const Vec2cd w = canonical_spinor(s);
    CHECK((spin_vector_from_spinor(w) - s).norm() < 1e-14);
    CHECK(std::abs(w.norm() - 1.0) < 1e-15);
  }
}

TEST_CASE("a full azimuth turn flips the spinor sign") {
  const double theta = 0.8;
  const double phi = 0.3;
  const Vec2cd w1 = spinor_from_angles(theta, phi);
  const Vec2cd w2 = spinor_from_angles(theta, phi + 2.0 * kPi);
  CHECK((w1 + w2).norm() < 1e-15);
  CHECK_THROWS_AS(spinor_from_angles(-0.1, 0.0), Error);
  CHECK_THROWS_AS(spinor_from_angles(3.5, 0.0), Error);
}

TEST_CASE("direct cartesian construction equals the angle route") {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const Vec3d s = rng.unit_sphere_guarded(0.01, 0.0);
    CHECK((spinor_from_cartesian(s) - canonical_spinor(s)).norm() < 1e-14);
  }
  // The s_y < 0 half space takes the conjugate branch.
  const Vec3d below(0.3, -0.4, 0.5);
  CHECK((spinor_from_cartesian(below) - canonical_spinor(below)).norm() <
        1e-14);
  const Vec2cd w = spinor_from_cartesian(below);
  CHECK((spin_vector_from_spinor(w) - below.normalized()).norm() < 1e-14);
}

TEST_CASE("canonical spinor collapses cleanly at the poles") {
  const Vec2cd north = canonical_spinor(Vec3d(0.0, 0.0, 2.0));
  CHECK(north[0] == Complex<double>(1.0, 0.0));
  CHECK(north[1] == Complex<double>(0.0, 0.0));
  const Vec2cd south = canonical_spinor(Vec3d(0.0, 0.0, -2.0));
  CHECK(std::abs(south[0]) < 1e-15);
  CHECK(std::abs(south[1] - Complex<double>(1.0, 0.0)) < 1e-15);
  // The cartesian form has no azimuth on the axis and must refuse it.
  CHECK_THROWS_AS(spinor_from_cartesian(Vec3d(0.0, 0.0, 1.0)),
                  PoleSingularity);
  CHECK_THROWS_AS(spinor_from_cartesian(Vec3d::Zero().eval()), ZeroSpinVector);
}

TEST_CASE("spinor map depends only on the direction, not the length") {
  const Vec3d s(0.3, -0.7, 0.2);
  CHECK((canonical_spinor(Vec3d(5.0 * s)) - canonical_spinor(s)).norm() <
        1e-15);
  CHECK((spinor_from_cartesian(Vec3d(0.25 * s)) - spinor_from_cartesian(s))
            .norm() < 1e-15);
}

TEST_CASE("variant closed form agrees only where its radicals coincide") {
  // Equality holds exactly on the s_x = s_z surface, both azimuth branches.
  for (const Vec3d& s : {Vec3d(0.5, 0.3, 0.5), Vec3d(0.5, -0.3, 0.5)}) {
    const Vec3d sn = s.normalized();
    CHECK((spinor_from_cartesian_variant(sn) - canonical_spinor(sn)).norm() <
          1e-14);
  }
  // Elsewhere the carried direction departs from s at finite size and the
  // spinor is not unit; both defects are pinned, not repaired.
  const Vec3d off = Vec3d(0.3, -0.4, 0.5).normalized();
  const Vec2cd wv = spinor_from_cartesian_variant(off);
  CHECK((spin_vector_from_spinor(wv) - off).norm() > 0.3);
  CHECK((spin_vector_from_spinor(wv) - off).norm() < 0.4);
  CHECK(std::abs(wv.squaredNorm() - 1.0) > 0.1);
  // Below the cone s_z = -s_perp one radical turns negative.
  CHECK_THROWS_AS(
      spinor_from_cartesian_variant(Vec3d(0.1, 0.05, -0.9).normalized().eval()),
      Error);
  CHECK_THROWS_AS(spinor_from_cartesian_variant(Vec3d(0.0, 0.0, 1.0)),
                  PoleSingularity);
}

TEST_CASE("zero spinor has no direction") {
  CHECK_THROWS_AS(spin_vector_from_spinor(Vec2cd::Zero().eval()), ZeroSpinor);
}
