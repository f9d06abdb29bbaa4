#ifndef SPINBERRY_TYPES_HPP
#define SPINBERRY_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace spinberry {

template <typename S> using Complex = std::complex<S>;

template <typename S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S> using Vec2c = Eigen::Matrix<Complex<S>, 2, 1>;
template <typename S> using Vec4c = Eigen::Matrix<Complex<S>, 4, 1>;
template <typename S> using Mat2c = Eigen::Matrix<Complex<S>, 2, 2>;
template <typename S> using Mat4c = Eigen::Matrix<Complex<S>, 4, 4>;

using Vec3d = Vec3<double>;
using Vec2cd = Vec2c<double>;
using Vec4cd = Vec4c<double>;
using Mat2cd = Mat2c<double>;
using Mat4cd = Mat4c<double>;

template <typename S> constexpr S pi_v = S(3.14159265358979323846264338327950288L);
inline constexpr double kPi = pi_v<double>;

// Contours, meshes and derivative stencils must stay at s_perp >= kPoleGuard * |s|.
inline constexpr double kPoleGuard = 1e-6;

// Principal value in (-pi, pi].
template <typename S> S wrap_angle(S x) {
  S r = std::remainder(x, S(2) * pi_v<S>);
  if (r <= -pi_v<S>) r += S(2) * pi_v<S>;
  return r;
}

// Distance from x to the nearest integer multiple of pi, and that multiple.
// Used when two phase routes are allowed to differ by a quantized offset.
template <typename S> S residual_mod_pi(S x, long* multiple = nullptr) {
  S r = std::remainder(x, pi_v<S>);
  if (multiple) *multiple = std::lround((x - r) / pi_v<S>);
  return r;
}

}  // namespace spinberry

#endif
