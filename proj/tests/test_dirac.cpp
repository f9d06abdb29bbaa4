#include <doctest.h>

#include <cmath>
#include <vector>

#include <spinberry/clifford.hpp>
#include <spinberry/dirac.hpp>
#include <spinberry/quadrature.hpp>
#include <spinberry/random.hpp>
#include <spinberry/spin_param.hpp>

using namespace spinberry;

namespace {

const Vec3d kP(0.3, -0.5, 0.7);
constexpr double kMass = 1.3;

double radial_integral(const RadialProfile<double>& f, int power_of_e,
                       bool squared) {
  // 1D oracle: int_0^pmax p^2 f(^2) E^power dp on a dense independent rule.
  std::vector<double> x, w;
  gauss_legendre(200, 0.0, f.p_max, x, w);
  double sum = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double p = x[i];
    const double amp = squared ? f(p) * f(p) : f(p);
    const double e = std::sqrt(1.0 + p * p);
    sum += w[i] * p * p * amp * std::pow(e, power_of_e);
  }
  return sum;
}

}  // namespace

TEST_CASE("energy lies on the mass shell") {
  const double e = energy(kP, kMass);
  CHECK(std::abs(e * e - (kMass * kMass + kP.squaredNorm())) < 1e-15);
  CHECK(energy(Vec3d::Zero().eval(), 2.0) == 2.0);
}

TEST_CASE("slash construction yields hamiltonian eigenvectors") {
  const Mat4cd h = dirac_hamiltonian(kP, kMass);
  const double e = energy(kP, kMass);
  for (int k = 0; k < 4; ++k) {
    const Vec4cd a = Vec4cd::Unit(k);
    const Vec4cd u = u_spinor(kP, a, kMass);
    const Vec4cd v = v_spinor(kP, a, kMass);
    CHECK((h * u - e * u).norm() < 1e-12 * u.norm());
    CHECK((h * v + e * v).norm() < 1e-12 * v.norm());
  }
}

TEST_CASE("zero-momentum spinors reduce to the block doubling") {
  const Vec3d zero = Vec3d::Zero();
  const Vec4cd u = u_spinor(zero, Vec4cd::Unit(0).eval(), kMass);
  const Vec4cd v = v_spinor(zero, Vec4cd::Unit(0).eval(), kMass);
  CHECK((u - kMass * Vec4cd(1, 0, 1, 0)).norm() < 1e-15);
  CHECK((v - kMass * Vec4cd(1, 0, -1, 0)).norm() < 1e-15);
}

TEST_CASE("two positive and two negative branches span all four components") {
  const double e2 = kMass * kMass + kP.squaredNorm();
  Mat4cd cols;
  cols.col(0) = u_spinor(kP, Vec4cd::Unit(0).eval(), kMass);
  cols.col(1) = u_spinor(kP, Vec4cd::Unit(1).eval(), kMass);
  cols.col(2) = v_spinor(kP, Vec4cd::Unit(0).eval(), kMass);
  cols.col(3) = v_spinor(kP, Vec4cd::Unit(1).eval(), kMass);
  const Complex<double> det = cols.determinant();
  // det = 4 E^2 m^2 for this seed choice; nonzero certifies independence.
  CHECK(std::abs(det.real() - 17.035200000000003) < 1e-12);
  CHECK(std::abs(det.imag()) < 1e-12);
  CHECK(std::abs(4.0 * e2 * kMass * kMass - 17.035200000000003) < 1e-12);
  cols.col(2) = v_spinor(kP, Vec4cd::Unit(2).eval(), kMass);
  cols.col(3) = v_spinor(kP, Vec4cd::Unit(3).eval(), kMass);
  const Complex<double> det2 = cols.determinant();
  CHECK(std::abs(det2.real() - 17.035200000000003) < 1e-12);
  CHECK(std::abs(det2.imag()) < 1e-12);
}

TEST_CASE("closed block form equals the unit-seed superposition") {
  Rng rng(21);
  const DiracFamily<double> fam;
  for (int i = 0; i < 20; ++i) {
    const Vec3d s = rng.unit_sphere();
    const Vec3d p(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Vec4cd direct = bispinor_from_spinor(canonical_spinor(s), p, 1.0);
    const Vec4cd seeded = family_bispinor(fam, s, p);
    CHECK((direct - seeded).norm() < 1e-12 * direct.norm());
  }
}

TEST_CASE("momentum overlap factorizes through the spinor overlap") {
  const DiracFamily<double> fam;
  const QuadratureSpec quad{32, 16, 16};
  Rng rng(22);
  double ratio0 = 0.0;
  for (int i = 0; i < 8; ++i) {
    Vec3d s1 = rng.unit_sphere();
    Vec3d s2 = rng.unit_sphere();
    Complex<double> wdot = canonical_spinor(s1).dot(canonical_spinor(s2));
    while (std::abs(wdot) < 0.1) {
      s2 = rng.unit_sphere();
      wdot = canonical_spinor(s1).dot(canonical_spinor(s2));
    }
    const Complex<double> ratio = momentum_overlap(fam, s1, s2, quad) / wdot;
    CHECK(std::abs(ratio.imag()) < 1e-12 * std::abs(ratio.real()));
    if (i == 0)
      ratio0 = ratio.real();
    else
      CHECK(std::abs(ratio.real() - ratio0) < 1e-10 * std::abs(ratio0));
  }
  // The proportionality constant is a pure radial integral, already converged:
  // doubling every node count moves it below the same tolerance.
  const Vec3d sa(0.6, 0.0, 0.8);
  const Vec3d sb(0.0, 0.6, 0.8);
  const Complex<double> coarse = momentum_overlap(fam, sa, sb, quad);
  const Complex<double> fine =
      momentum_overlap(fam, sa, sb, QuadratureSpec{64, 32, 32});
  CHECK(std::abs(coarse - fine) < 1e-10 * std::abs(fine));
}

TEST_CASE("covariant spin ratio reproduces the spinor ratio") {
  const DiracFamily<double> fam;
  const QuadratureSpec quad{48, 16, 16};
  Rng rng(23);
  for (int i = 0; i < 5; ++i) {
    const Vec3d s = rng.unit_sphere();
    const SpinExpectation<double> rep = spin_expectation_report(fam, s, quad);
    CHECK((rep.covariant - s).norm() < 1e-10);
    CHECK(rep.covariant_weight > 0.0);
    CHECK(rep.density_weight > 0.0);
  }
}

TEST_CASE("density spin ratio shrinks by the frozen relativistic factor") {
  const DiracFamily<double> fam;
  const QuadratureSpec quad{48, 16, 16};
  // 1D oracle for the shrink factor of the unit-mass unit-width family:
  // c = int p^2 f^2 (1 + p^2/3) / E^2 dp / int p^2 f^2 dp.
  std::vector<double> x, w;
  gauss_legendre(200, 0.0, fam.profile.p_max, x, w);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double p = x[i];
    const double f2 = fam.profile(p) * fam.profile(p);
    num += w[i] * p * p * f2 * (1.0 + p * p / 3.0) / (1.0 + p * p);
    den += w[i] * p * p * f2;
  }
  const double shrink = num / den;
  CHECK(std::abs(shrink - 0.6561704584782502) < 1e-12);
  const Vec3d s = Vec3d(0.3, -0.2, 0.6).normalized();
  const SpinExpectation<double> rep = spin_expectation_report(fam, s, quad);
  CHECK((rep.density - shrink * s).norm() < 1e-10);
  CHECK((rep.covariant - s).norm() < 1e-10);
}

TEST_CASE("origin value of the packet matches the radial closed form") {
  const DiracFamily<double> fam;
  const QuadratureSpec quad{64, 16, 16};
  const Vec3d s = Vec3d(0.4, 0.3, 0.6).normalized();
  const Vec2cd wspin = canonical_spinor(s);
  const Vec4cd psi =
      evaluate_wavefunction(fam, s, Vec3d::Zero().eval(), 0.0, quad);
  // Odd sigma.p terms cancel; the blocks reduce to radial moments of f.
  const double norm_const = std::pow(2.0 * kPi, -1.5);
  const double c_upper = 4.0 * kPi * radial_integral(fam.profile, -1, false);
  const double c_lower = 4.0 * kPi * radial_integral(fam.profile, 0, false);
  const Vec2cd upper = psi.head<2>();
  const Vec2cd lower = psi.tail<2>();
  CHECK((upper - Vec2cd(norm_const * c_upper * wspin)).norm() <
        1e-10 * upper.norm());
  CHECK((lower - Vec2cd(norm_const * c_lower * wspin)).norm() <
        1e-10 * lower.norm());
}

TEST_CASE("narrow packet at the origin rotates at the rest frequency") {
  DiracFamily<double> fam;
  fam.profile = RadialProfile<double>::gaussian(0.01);
  const QuadratureSpec quad{64, 16, 16};
  const Vec3d s(0.0, 0.0, 1.0);
  const MomentumGrid<double> grid(fam.profile, fam.mass, quad);
  const Vec2cd w = canonical_spinor(s);
  const Vec4cd at0 = evaluate_wavefunction(grid, w, Vec3d::Zero().eval(), 0.0);
  const Vec4cd at1 = evaluate_wavefunction(grid, w, Vec3d::Zero().eval(), 1.0);
  const Complex<double> rewind(std::cos(1.0), std::sin(1.0));
  CHECK((rewind * at1 - at0).norm() < 1e-3 * at0.norm());
  CHECK((at1 - at0).norm() > 0.5 * at0.norm());
}

TEST_CASE("profile and family guards reject unusable parameters") {
  CHECK_THROWS_AS(
      (RadialProfile<double>{ProfileShape::Gaussian, 0.0, 8.0}.validate()),
      QuadratureDivergence);
  CHECK_THROWS_AS(
      (RadialProfile<double>{ProfileShape::Gaussian, 1.0, -1.0}.validate()),
      QuadratureDivergence);
  DiracFamily<double> fam;
  fam.mass = 0.0;
  CHECK_THROWS_AS(fam.validate(), Error);
  DiracFamily<double> unmapped;
  unmapped.spinor_map = nullptr;
  CHECK_THROWS_AS(unmapped.validate(), Error);
}

TEST_CASE("vanishing norm integrals are refused, not divided by") {
  DiracFamily<double> fam;
  fam.profile.p_max = 1e-120;  // weights underflow: p^2 dp ~ 1e-360
  const QuadratureSpec quad{8, 4, 4};
  CHECK_THROWS_AS(spin_expectation_report(fam, Vec3d(0.0, 0.0, 1.0), quad),
                  DegenerateDenominator);
  const FamilyOverlap<double> ov(fam, quad);
  CHECK_THROWS_AS(ov.norm(Vec3d(0.0, 0.0, 1.0)), DegenerateDenominator);
}
