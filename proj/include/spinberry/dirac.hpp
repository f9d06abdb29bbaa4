#ifndef SPINBERRY_DIRAC_HPP
#define SPINBERRY_DIRAC_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <spinberry/clifford.hpp>
#include <spinberry/errors.hpp>
#include <spinberry/quadrature.hpp>
#include <spinberry/spin_param.hpp>
#include <spinberry/types.hpp>

// Free-electron Dirac wave packets parametrized by a spin direction.  A state
// is a momentum superposition of positive-energy plane waves with a spherically
// symmetric amplitude f(p) and a fixed two-component spinor w; all spin
// information lives in w, all translational information in f.  Momentum-space
// inner products use the invariant measure d^3p / E_p on each factor.

namespace spinberry {

template <typename S>
S energy(const Vec3<S>& p, S mass) {
  return std::sqrt(mass * mass + p.squaredNorm());
}

enum class ProfileShape { Gaussian, Exponential };

// Spherically symmetric momentum amplitude f(p) together with the radial
// cutoff p_max used by every quadrature over it.  Both shapes decay fast
// enough that all norm integrals converge.
template <typename S>
struct RadialProfile {
  ProfileShape shape = ProfileShape::Gaussian;
  S width = S(1);
  S p_max = S(8);

  void validate() const {
    if (!(width > S(0)) || !std::isfinite(width))
      throw QuadratureDivergence("profile width must be positive and finite");
    if (!(p_max > S(0)) || !std::isfinite(p_max))
      throw QuadratureDivergence("profile cutoff must be positive and finite");
  }

  S operator()(S p) const {
    const S x = p / width;
    return shape == ProfileShape::Gaussian ? std::exp(-x * x / S(2))
                                           : std::exp(-x);
  }

  static RadialProfile gaussian(S w) {
    return {ProfileShape::Gaussian, w, S(8) * w};
  }
  static RadialProfile exponential(S w) {
    return {ProfileShape::Exponential, w, S(20) * w};
  }
};

// gamma^mu p_mu + m with the caller's choice of p_0.  Applying it to fixed
// bispinors yields eigenvectors of the momentum-space Hamiltonian
// H(p) = alpha.p + beta m: eigenvalue +E_p for p_0 = +E_p, -E_p for -E_p.
template <typename S>
Mat4c<S> momentum_slash(const Vec3<S>& p, S p0, S mass) {
  Mat4c<S> op = gamma<S>(0) * Complex<S>(p0);
  for (int i = 0; i < 3; ++i) op -= gamma<S>(i + 1) * Complex<S>(p[i]);
  op += mass * Mat4c<S>::Identity();
  return op;
}

// Positive-energy eigenvector (gamma^mu p_mu + m) a at p_0 = +E_p.
template <typename S>
Vec4c<S> u_spinor(const Vec3<S>& p, const Vec4c<S>& a, S mass) {
  return momentum_slash(p, energy(p, mass), mass) * a;
}

// Negative-energy eigenvector: the same operator at p_0 = -E_p.
template <typename S>
Vec4c<S> v_spinor(const Vec3<S>& p, const Vec4c<S>& a_tilde, S mass) {
  return momentum_slash(p, -energy(p, mass), mass) * a_tilde;
}

// u(p,+) carrying w_+ plus u(p,-) carrying w_-, evaluated in closed block
// form: upper block m w, lower block (E - sigma.p) w.  Equal to the
// u_spinor construction with the unit-bispinor embeddings of w (pinned by
// tests); this form is the quadrature hot path.
template <typename S>
Vec4c<S> bispinor_from_spinor(const Vec2c<S>& w, const Vec3<S>& p, S mass) {
  const Complex<S> e(energy(p, mass));
  Vec4c<S> out;
  out.template head<2>() = Complex<S>(mass) * w;
  out.template tail<2>() = e * w - pauli_dot(p) * w;
  return out;
}

// Wave-packet family: mass, momentum profile, and the map from a spin
// direction to the spinor it rides on.
template <typename S>
struct DiracFamily {
  S mass = S(1);
  RadialProfile<S> profile{};
  std::function<Vec2c<S>(const Vec3<S>&)> spinor_map = &canonical_spinor<S>;

  void validate() const {
    if (!(mass > S(0)) || !std::isfinite(mass))
      throw Error("family mass must be positive and finite");
    profile.validate();
    if (!spinor_map) throw Error("family has no spinor map");
  }
};

// Momentum-space Fourier coefficient bispinor of the family state at s,
// assembled from u_spinor applied to the two unit-bispinor embeddings of w.
template <typename S>
Vec4c<S> family_bispinor(const DiracFamily<S>& fam, const Vec3<S>& s,
                         const Vec3<S>& p) {
  const Vec2c<S> w = fam.spinor_map(s);
  Vec4c<S> a_plus = Vec4c<S>::Zero();
  Vec4c<S> a_minus = Vec4c<S>::Zero();
  a_plus[0] = w[0];
  a_minus[1] = w[1];
  return u_spinor(p, a_plus, fam.mass) + u_spinor(p, a_minus, fam.mass);
}

// Product quadrature over momentum space: Gauss-Legendre radial nodes on
// [0, p_max], Gauss-Legendre nodes in cos(theta_p), uniform azimuth starting
// at phi_p = 0.  For even azimuthal counts the node set is invariant under
// p -> -p, so integrands odd in p cancel node-pairwise.  weight carries the
// p^2 Jacobian; the 1/E_p measure factors are applied by the consumers.
template <typename S = double>
struct MomentumGrid {
  std::vector<Vec3<S>> nodes;
  std::vector<S> e;       // E_p at each node
  std::vector<S> f;       // profile amplitude at each node
  std::vector<S> weight;  // p^2 dp dcos dphi weight
  S mass = S(1);

  MomentumGrid(const RadialProfile<S>& profile, S m, const QuadratureSpec& q)
      : mass(m) {
    q.validate();
    profile.validate();
    if (!(mass > S(0)) || !std::isfinite(mass))
      throw Error("grid mass must be positive and finite");
    std::vector<double> xr, wr, xc, wc;
    gauss_legendre(q.n_radial, 0.0, static_cast<double>(profile.p_max), xr, wr);
    gauss_legendre(q.n_polar, -1.0, 1.0, xc, wc);
    const S dphi = S(2) * pi_v<S> / S(q.n_azimuthal);
    const std::size_t total = static_cast<std::size_t>(q.n_radial) *
                              static_cast<std::size_t>(q.n_polar) *
                              static_cast<std::size_t>(q.n_azimuthal);
    nodes.reserve(total);
    e.reserve(total);
    f.reserve(total);
    weight.reserve(total);
    for (int ir = 0; ir < q.n_radial; ++ir) {
      const S p = S(xr[ir]);
      const S amp = profile(p);
      if (!std::isfinite(amp))
        throw QuadratureDivergence("profile amplitude is not finite");
      for (int ic = 0; ic < q.n_polar; ++ic) {
        const S c = S(xc[ic]);
        const S st = std::sqrt(std::max(S(0), S(1) - c * c));
        for (int ip = 0; ip < q.n_azimuthal; ++ip) {
          const S phi = dphi * S(ip);
          nodes.emplace_back(p * st * std::cos(phi), p * st * std::sin(phi),
                             p * c);
          e.push_back(std::sqrt(mass * mass + p * p));
          f.push_back(amp);
          weight.push_back(S(wr[ir]) * S(wc[ic]) * dphi * p * p);
        }
      }
    }
  }
};

// integral d^3p E_p^-2 f(p)^2 u^dag(p; w1) u(p; w2).  Hermitian in (w1, w2)
// and positive for w1 = w2.  One factor 1/E_p per state comes from the
// invariant measure normalization of the Fourier representation.
template <typename S>
Complex<S> momentum_overlap(const MomentumGrid<S>& g, const Vec2c<S>& w1,
                            const Vec2c<S>& w2) {
  const S m2 = g.mass * g.mass;
  const Complex<S> result =
      pairwise_sum(g.nodes.size(), [&](std::size_t i) -> Complex<S> {
        const Mat2c<S> sp = pauli_dot(g.nodes[i]);
        const Complex<S> e(g.e[i]);
        const Vec2c<S> l1 = e * w1 - sp * w1;
        const Vec2c<S> l2 = e * w2 - sp * w2;
        const Complex<S> dot = m2 * w1.dot(w2) + l1.dot(l2);
        return (g.weight[i] * g.f[i] * g.f[i] / (g.e[i] * g.e[i])) * dot;
      });
  if (!std::isfinite(result.real()) || !std::isfinite(result.imag()))
    throw QuadratureDivergence("overlap integral is not finite");
  return result;
}

template <typename S>
Complex<S> momentum_overlap(const DiracFamily<S>& fam, const Vec3<S>& s1,
                            const Vec3<S>& s2, const QuadratureSpec& q) {
  fam.validate();
  const MomentumGrid<S> g(fam.profile, fam.mass, q);
  return momentum_overlap(g, fam.spinor_map(s1), fam.spinor_map(s2));
}

// Spin expectation of the family state under the block-diagonal spin matrices
// {sigma_23, sigma_31, sigma_12}, reported with both normalizations: the
// Lorentz-scalar weight Psi^dag gamma^0 Psi ("covariant") and the probability
// density Psi^dag Psi ("density").  The covariant ratio reproduces the input
// direction exactly up to quadrature error; the density ratio keeps the
// direction but shrinks the length as the packet becomes relativistic.
template <typename S>
struct SpinExpectation {
  Vec3<S> covariant;
  Vec3<S> density;
  S covariant_weight;  // denominator integral of the covariant ratio
  S density_weight;    // denominator integral of the density ratio
};

template <typename S>
SpinExpectation<S> spin_expectation_report(const DiracFamily<S>& fam,
                                           const Vec2c<S>& w,
                                           const QuadratureSpec& q) {
  fam.validate();
  const MomentumGrid<S> g(fam.profile, fam.mass, q);
  const Mat4c<S> g0 = gamma<S>(0);
  const Mat4c<S> spin[3] = {spin_matrix<S>(0), spin_matrix<S>(1),
                            spin_matrix<S>(2)};
  Vec3<S> num_cov = Vec3<S>::Zero();
  Vec3<S> num_den = Vec3<S>::Zero();
  S den_cov = S(0);
  S den_den = S(0);
  // Six reductions share one node sweep; each is its own deterministic
  // pairwise sum over a cached per-node bispinor table.
  std::vector<Vec4c<S>> u(g.nodes.size());
  std::vector<S> scale(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    u[i] = bispinor_from_spinor(w, g.nodes[i], g.mass);
    scale[i] = g.weight[i] * g.f[i] * g.f[i] / (g.e[i] * g.e[i]);
  }
  den_cov = pairwise_sum(g.nodes.size(), [&](std::size_t i) {
    return scale[i] * (u[i].adjoint() * g0 * u[i])(0).real();
  });
  den_den = pairwise_sum(g.nodes.size(), [&](std::size_t i) {
    return scale[i] * u[i].squaredNorm();
  });
  for (int k = 0; k < 3; ++k) {
    num_cov[k] = pairwise_sum(g.nodes.size(), [&](std::size_t i) {
      return scale[i] * (u[i].adjoint() * g0 * spin[k] * u[i])(0).real();
    });
    num_den[k] = pairwise_sum(g.nodes.size(), [&](std::size_t i) {
      return scale[i] * (u[i].adjoint() * spin[k] * u[i])(0).real();
    });
  }
  if (!(den_cov > S(1e-140)) || !(den_den > S(1e-140)))
    throw DegenerateDenominator();
  return {num_cov / den_cov, num_den / den_den, den_cov, den_den};
}

template <typename S>
SpinExpectation<S> spin_expectation_report(const DiracFamily<S>& fam,
                                           const Vec3<S>& s,
                                           const QuadratureSpec& q) {
  return spin_expectation_report(fam, Vec2c<S>(fam.spinor_map(s)), q);
}

template <typename S>
Vec3<S> spin_expectation(const DiracFamily<S>& fam, const Vec3<S>& s,
                         const QuadratureSpec& q) {
  return spin_expectation_report(fam, s, q).covariant;
}

// Position-space value of the family state:
// integral d^3p (2 pi)^-3/2 E_p^-1 f(p) exp(-i (E_p t - p.r)) u(p; w(s)).
template <typename S>
Vec4c<S> evaluate_wavefunction(const MomentumGrid<S>& g, const Vec2c<S>& w,
                               const Vec3<S>& r, S t) {
  const S norm_const = std::pow(S(2) * pi_v<S>, S(-1.5));
  const Vec4c<S> sum =
      pairwise_sum(g.nodes.size(), [&](std::size_t i) -> Vec4c<S> {
        const S phase = -(g.e[i] * t - g.nodes[i].dot(r));
        const Complex<S> ph(std::cos(phase), std::sin(phase));
        const Complex<S> coeff = ph * Complex<S>(g.weight[i] * g.f[i] / g.e[i]);
        return Vec4c<S>(coeff * bispinor_from_spinor(w, g.nodes[i], g.mass));
      });
  if (!sum.allFinite())
    throw QuadratureDivergence("wavefunction integral is not finite");
  return norm_const * sum;
}

template <typename S>
Vec4c<S> evaluate_wavefunction(const DiracFamily<S>& fam, const Vec3<S>& s,
                               const Vec3<S>& r, S t, const QuadratureSpec& q) {
  fam.validate();
  const MomentumGrid<S> g(fam.profile, fam.mass, q);
  return evaluate_wavefunction(g, fam.spinor_map(s), r, t);
}

// Normalized momentum-space overlaps of family states on one shared grid.
// Used by every phase route that differentiates or links the family in s.
template <typename S>
class FamilyOverlap {
 public:
  FamilyOverlap(const DiracFamily<S>& fam, const QuadratureSpec& q)
      : fam_(fam), grid_(fam.profile, fam.mass, q) {
    fam_.validate();
  }

  Complex<S> raw(const Vec3<S>& s1, const Vec3<S>& s2) const {
    return momentum_overlap(grid_, fam_.spinor_map(s1), fam_.spinor_map(s2));
  }

  S norm(const Vec3<S>& s) const {
    const S n2 = raw(s, s).real();
    if (!(n2 > S(1e-140))) throw DegenerateDenominator();
    return std::sqrt(n2);
  }

  Complex<S> normalized(const Vec3<S>& s1, const Vec3<S>& s2) const {
    return raw(s1, s2) / (norm(s1) * norm(s2));
  }

  const DiracFamily<S>& family() const { return fam_; }
  const MomentumGrid<S>& grid() const { return grid_; }

 private:
  DiracFamily<S> fam_;
  MomentumGrid<S> grid_;
};

}  // namespace spinberry

#endif
