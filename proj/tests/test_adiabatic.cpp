#include <doctest.h>

#include <cmath>
#include <vector>

#include <spinberry/adiabatic.hpp>
#include <spinberry/contour.hpp>
#include <spinberry/spin_param.hpp>

using namespace spinberry;
using std::complex;

TEST_CASE("midpoint stepper preserves the norm exactly enough") {
  const FieldPath<double> path = cone_path(1.0, 2.0, 3.0);
  const Vec2cd psi0 = lower_eigenstate(path.direction(0.0));
  const EvolutionResult<double> r = evolve(path, psi0, 3000);
  CHECK(std::abs(r.psi_final.norm() - 1.0) < 1e-13);
}

TEST_CASE("static aligned field accrues pure dynamical phase") {
  // theta = 0: the path never moves, the state stays the eigenstate, and the
  // accumulated phase is +delta T / 2 with no geometric part.
  const FieldPath<double> path = cone_path(0.0, 1.0, 10.0);
  const Vec2cd psi0 = lower_eigenstate(path.direction(0.0));
  const EvolutionResult<double> r = evolve(path, psi0, 20000);
  CHECK(std::abs(r.total_unwrapped - 5.0) < 1e-10);
  CHECK(std::abs(r.geometric) < 1e-10);
  CHECK(r.winding == 1);
  CHECK(r.fidelity > 1.0 - 1e-12);
  CHECK(r.reliable);
}

TEST_CASE("anti-aligned start flips the dynamical sign and kills fidelity") {
  const FieldPath<double> path = cone_path(0.0, 1.0, 10.0);
  const Vec2cd psi0 = canonical_spinor(Vec3d(0.0, 0.0, -1.0));
  const EvolutionResult<double> r = evolve(path, psi0, 20000);
  CHECK(std::abs(r.total_unwrapped + 5.0) < 1e-10);
  CHECK(r.fidelity < 1e-10);
  CHECK_FALSE(r.reliable);
}

TEST_CASE("stepper matches the rotating-frame closed solution") {
  // One cone revolution maps, in the co-rotating frame, to evolution under the
  // constant field delta n0 + (2 pi / T) z; the final state is exact.
  const double theta = kPi / 3;
  const double delta = 1.0;
  for (const double T : {1.0, 0.3}) {
    const FieldPath<double> path = cone_path(theta, delta, T);
    const Vec2cd psi0 = lower_eigenstate(path.direction(0.0));
    const EvolutionResult<double> r = evolve(path, psi0, 20000);
    Vec3d beff = delta * path.direction(0.0) + (2.0 * kPi / T) * Vec3d::UnitZ();
    const double b = beff.norm();
    const Mat2cd rot =
        std::cos(b * T / 2.0) * Mat2cd::Identity() +
        complex<double>(0.0, 1.0) * std::sin(b * T / 2.0) *
            pauli_dot(Vec3d(beff / b));
    const Vec2cd exact = -(rot * psi0);
    CHECK((r.psi_final - exact).norm() < 1e-9);
  }
}

TEST_CASE("slow sweep isolates the geometric phase of the cone") {
  const FieldPath<double> path = cone_path(kPi / 3, 1.0, 200.0);
  const Vec2cd psi0 = lower_eigenstate(path.direction(0.0));
  const EvolutionResult<double> r = evolve(path, psi0, 20000);
  const double err = std::abs(r.geometric + kPi / 2);
  CHECK(err > 0.02);
  CHECK(err < 0.05);
  CHECK(r.fidelity > 0.999);
  CHECK(r.reliable);
  CHECK(std::abs(wrap_angle(r.geometric_expectation - r.geometric)) < 0.1);
  CHECK(std::abs(r.dynamical_eigenvalue - 100.0) < 1e-12);
}

TEST_CASE("residual error decays like one over the duration") {
  const SweepResult<double> sweep =
      geometric_phase_sweep(kPi / 3, 1.0, {25.0, 50.0, 100.0}, 20000);
  REQUIRE(sweep.errors.size() == 3);
  CHECK(sweep.errors[0] > sweep.errors[1]);
  CHECK(sweep.errors[1] > sweep.errors[2]);
  CHECK(sweep.exponent > -1.3);
  CHECK(sweep.exponent < -0.7);
  REQUIRE(sweep.runs.size() == 3);
  CHECK(std::abs(sweep.errors[2] -
                 std::abs(wrap_angle(sweep.runs[2].geometric + kPi / 2))) <
        1e-12);
}

TEST_CASE("piecewise great-circle path visits its waypoints in order") {
  const auto oct = ParameterContour<double>::octant();
  const FieldPath<double> path = interpolated_path(oct, 1.0, 9.0);
  CHECK((path.direction(0.0) - Vec3d::UnitX()).norm() < 1e-12);
  const Vec3d mid = Vec3d(1.0, 1.0, 0.0).normalized();
  CHECK((path.direction(1.5) - mid).norm() < 1e-12);
  for (const double t : {0.4, 2.7, 5.1, 8.2}) {
    CHECK(std::abs(path.direction(t).norm() - 1.0) < 1e-12);
  }
  CHECK((path.direction(9.0) - path.direction(0.0)).norm() < 1e-12);
}

TEST_CASE("winding separates principal value from accumulated phase") {
  // Total phase near delta T / 2 - pi / 2 = 18.43 lives three turns above its
  // principal value.
  const FieldPath<double> path = cone_path(kPi / 3, 1.0, 40.0);
  const Vec2cd psi0 = lower_eigenstate(path.direction(0.0));
  const EvolutionResult<double> r = evolve(path, psi0, 20000);
  CHECK(r.winding == 3);
  CHECK(std::abs(r.total_unwrapped -
                 (r.total_principal + 2.0 * kPi * r.winding)) < 1e-12);
}

TEST_CASE("lower eigenstate satisfies its defining equation") {
  const Vec3d n = Vec3d(0.3, -0.5, 0.7).normalized();
  const Vec2cd w = lower_eigenstate(n);
  CHECK((pauli_dot(n) * w - w).norm() < 1e-14);
  CHECK(std::abs(w.norm() - 1.0) < 1e-15);
}

TEST_CASE("evolution rejects malformed inputs") {
  const FieldPath<double> path = cone_path(kPi / 3, 1.0, 1.0);
  const Vec2cd psi0 = lower_eigenstate(path.direction(0.0));
  CHECK_THROWS_AS(evolve(path, psi0, 0), Error);
  CHECK_THROWS_AS(evolve(path, Vec2cd::Zero().eval(), 100), ZeroSpinor);

  FieldPath<double> stretched = path;
  stretched.direction = [](double) { return Vec3d(0.0, 0.0, 2.0); };
  CHECK_THROWS_AS(evolve(stretched, psi0, 100), NonUnitDirection);

  CHECK_THROWS_AS(cone_path(-0.1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(cone_path(1.0, -1.0, 5.0), Error);
  FieldPath<double> empty;
  CHECK_THROWS_AS(evolve(empty, psi0, 100), Error);

  CHECK_THROWS_AS(geometric_phase_sweep(kPi / 3, 1.0, {5.0}, 100), Error);
  CHECK_THROWS_AS(geometric_phase_sweep(kPi / 3, 1.0, {5.0, 4.0}, 100), Error);
}
