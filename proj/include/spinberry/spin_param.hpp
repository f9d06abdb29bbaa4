#ifndef SPINBERRY_SPIN_PARAM_HPP
#define SPINBERRY_SPIN_PARAM_HPP

#include <cmath>

#include <spinberry/errors.hpp>
#include <spinberry/types.hpp>

// Maps between spin directions s in R^3 and two-component spinors w with
// (w^dag sigma w)/(w^dag w) = s/|s|.  The canonical map goes through spherical
// angles and uses half-angle phases; it is double valued in phi, picking up a
// factor -1 per full turn.  The branch convention for the direct Cartesian
// form: the s_y < 0 half space uses the complex conjugate of the s_y > 0
// expression, matching phi = atan2(s_y, s_x) in (-pi, pi].

namespace spinberry {

template <typename S>
struct SphericalAngles {
  S theta;  // colatitude in [0, pi]
  S phi;    // azimuth in (-pi, pi]
};

template <typename S>
SphericalAngles<S> angles_from_spin(const Vec3<S>& s) {
  const S norm = s.norm();
  if (norm == S(0)) throw ZeroSpinVector();
  const S z = std::clamp(s[2] / norm, S(-1), S(1));
  return {std::acos(z), std::atan2(s[1], s[0])};
}

// w = (cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{+i phi/2}).
// theta must lie in [0, pi]; phi is unrestricted, with
// w(theta, phi + 2 pi) = -w(theta, phi).
template <typename S>
Vec2c<S> spinor_from_angles(S theta, S phi) {
  if (!(theta >= S(0) && theta <= pi_v<S> * (S(1) + S(1e-12))))
    throw Error("spinor_from_angles: theta outside [0, pi]");
  const Complex<S> lower_phase(std::cos(phi / 2), std::sin(phi / 2));
  Vec2c<S> w;
  w[0] = std::cos(theta / 2) * std::conj(lower_phase);
  w[1] = std::sin(theta / 2) * lower_phase;
  return w;
}

// Canonical spinor for a spin direction; total away from s = 0 (at the poles
// the azimuth collapses to phi = 0).
template <typename S>
Vec2c<S> canonical_spinor(const Vec3<S>& s) {
  const auto a = angles_from_spin(s);
  return spinor_from_angles(a.theta, a.phi);
}

// Direct Cartesian construction from half-angle identities:
//   cos(theta/2) = sqrt((1 + s_z/s)/2),  sin(theta/2) = sqrt((1 - s_z/s)/2),
//   cos(phi/2)   = sqrt((1 + s_x/s_perp)/2),
//   sin(phi/2)   = sign(s_y) sqrt((1 - s_x/s_perp)/2).
// Equals the angle route exactly, including the conjugate branch for s_y < 0.
// Undefined on the axis: s_perp = 0 has no azimuth.
template <typename S>
Vec2c<S> spinor_from_cartesian(const Vec3<S>& s) {
  const S norm = s.norm();
  if (norm == S(0)) throw ZeroSpinVector();
  const S perp = std::hypot(s[0], s[1]);
  if (perp == S(0)) throw PoleSingularity("spinor_from_cartesian");
  const S ct = std::sqrt(std::max(S(0), (S(1) + s[2] / norm) / S(2)));
  const S st = std::sqrt(std::max(S(0), (S(1) - s[2] / norm) / S(2)));
  const S cp = std::sqrt(std::max(S(0), (S(1) + s[0] / perp) / S(2)));
  S sp = std::sqrt(std::max(S(0), (S(1) - s[0] / perp) / S(2)));
  if (s[1] < S(0)) sp = -sp;
  Vec2c<S> w;
  w[0] = ct * Complex<S>(cp, -sp);
  w[1] = st * Complex<S>(cp, sp);
  return w;
}

// Alternate direct Cartesian closed form, kept only as a recorded cross-check.
// Note the radical arguments 1 - s_x/s and 1 + s_z/s_perp in the second
// component; the spin_param tests measure where the direction this spinor
// carries disagrees with s itself.  The form is not even real-definable for
// s_z < -s_perp, which the tests also record.
template <typename S>
Vec2c<S> spinor_from_cartesian_variant(const Vec3<S>& s) {
  const S norm = s.norm();
  if (norm == S(0)) throw ZeroSpinVector();
  const S perp = std::hypot(s[0], s[1]);
  if (perp == S(0)) throw PoleSingularity("spinor_from_cartesian_variant");
  const S r1 = S(1) + s[2] / norm;
  const S r2 = S(1) + s[0] / perp;
  const S r3 = S(1) - s[0] / perp;
  const S r4 = S(1) - s[0] / norm;
  const S r5 = S(1) + s[2] / perp;
  if (r5 < S(0))
    throw Error("variant spinor closed form undefined for this direction");
  Vec2c<S> w;
  w[0] = S(0.5) * std::sqrt(r1) * Complex<S>(std::sqrt(r2), -std::sqrt(r3));
  w[1] = S(0.5) * std::sqrt(r4) * Complex<S>(std::sqrt(r5), std::sqrt(r3));
  if (s[1] < S(0)) {
    w[0] = std::conj(w[0]);
    w[1] = std::conj(w[1]);
  }
  return w;
}

// Unit spin direction carried by a spinor: (w^dag sigma w)/(w^dag w).
template <typename S>
Vec3<S> spin_vector_from_spinor(const Vec2c<S>& w) {
  const S nn = std::norm(w[0]) + std::norm(w[1]);
  if (!(nn > S(1e-300))) throw ZeroSpinor();
  const Complex<S> cross = std::conj(w[0]) * w[1];
  return Vec3<S>(S(2) * cross.real(), S(2) * cross.imag(),
                 std::norm(w[0]) - std::norm(w[1])) /
         nn;
}

}  // namespace spinberry

#endif
