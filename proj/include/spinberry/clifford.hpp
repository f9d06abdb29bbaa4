#ifndef SPINBERRY_CLIFFORD_HPP
#define SPINBERRY_CLIFFORD_HPP

#include <spinberry/errors.hpp>
#include <spinberry/types.hpp>

// Fixed matrix conventions used throughout:
//   metric (+,-,-,-), chiral (Weyl) basis,
//   gamma^0 = [[0,I],[I,0]],  gamma^i = [[0,-sigma_i],[sigma_i,0]].
// Spatial indices are 1..3 for four-vectors, 0..2 for three-vectors.

namespace spinberry {

template <typename S = double>
Mat2c<S> pauli(int axis) {
  using C = Complex<S>;
  Mat2c<S> m;
  switch (axis) {
    case 0:
      m << C(0), C(1), C(1), C(0);
      break;
    case 1:
      m << C(0), C(0, -1), C(0, 1), C(0);
      break;
    case 2:
      m << C(1), C(0), C(0), C(-1);
      break;
    default:
      throw Error("pauli: axis must be 0, 1 or 2");
  }
  return m;
}

// sigma . v for a real 3-vector v.
template <typename S>
Mat2c<S> pauli_dot(const Vec3<S>& v) {
  using C = Complex<S>;
  Mat2c<S> m;
  m << C(v[2]), C(v[0], -v[1]), C(v[0], v[1]), C(-v[2]);
  return m;
}

// gamma^mu with the contravariant (upper) index, mu in 0..3.
template <typename S = double>
Mat4c<S> gamma(int mu) {
  if (mu < 0 || mu > 3) throw Error("gamma: index must be 0..3");
  Mat4c<S> g = Mat4c<S>::Zero();
  Mat2c<S> block = (mu == 0) ? Mat2c<S>::Identity() : pauli<S>(mu - 1);
  g.template block<2, 2>(0, 2) = (mu == 0) ? block : Mat2c<S>(-block);
  g.template block<2, 2>(2, 0) = block;
  return g;
}

// gamma_mu with the index lowered by the metric: gamma_0 = gamma^0,
// gamma_i = -gamma^i.
template <typename S = double>
Mat4c<S> gamma_lower(int mu) {
  Mat4c<S> g = gamma<S>(mu);
  return (mu == 0) ? g : Mat4c<S>(-g);
}

// sigma_{mu nu} = (i/2) (gamma_mu gamma_nu - gamma_nu gamma_mu), lower indices.
template <typename S = double>
Mat4c<S> sigma_munu(int mu, int nu) {
  const Mat4c<S> a = gamma_lower<S>(mu);
  const Mat4c<S> b = gamma_lower<S>(nu);
  return Complex<S>(0, S(0.5)) * (a * b - b * a);
}

// Spatial spin matrix for axis i in 0..2: {sigma_23, sigma_31, sigma_12}.
// Block diagonal diag(sigma_i, sigma_i) in this basis.
template <typename S = double>
Mat4c<S> spin_matrix(int axis) {
  switch (axis) {
    case 0: return sigma_munu<S>(2, 3);
    case 1: return sigma_munu<S>(3, 1);
    case 2: return sigma_munu<S>(1, 2);
    default: throw Error("spin_matrix: axis must be 0, 1 or 2");
  }
}

// Free Dirac Hamiltonian alpha . p + beta m with alpha_i = gamma^0 gamma^i and
// beta = gamma^0.
template <typename S>
Mat4c<S> dirac_hamiltonian(const Vec3<S>& p, S mass) {
  Mat4c<S> h = gamma<S>(0) * Complex<S>(mass);
  for (int i = 0; i < 3; ++i) h += Complex<S>(p[i]) * gamma<S>(0) * gamma<S>(i + 1);
  return h;
}

}  // namespace spinberry

#endif
