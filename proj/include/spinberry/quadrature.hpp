#ifndef SPINBERRY_QUADRATURE_HPP
#define SPINBERRY_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <spinberry/errors.hpp>

namespace spinberry {

struct QuadratureSpec {
  int n_radial = 64;     // Gauss-Legendre nodes on [0, p_max]
  int n_polar = 32;      // Gauss-Legendre nodes in cos(theta_p) on [-1, 1]
  int n_azimuthal = 32;  // periodic trapezoid nodes in phi_p on [0, 2*pi)

  void validate() const {
    if (n_radial < 2 || n_polar < 2 || n_azimuthal < 2)
      throw Error("quadrature node counts must all be >= 2");
  }
};

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
// Nodes are returned in increasing order and are symmetric about 0.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th root (descending order).
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

// Gauss-Legendre rule mapped to [a, b].
inline void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w) {
  gauss_legendre(n, x, w);
  const double mid = 0.5 * (a + b), hal = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + hal * x[i];
    w[i] *= hal;
  }
}

// Deterministic pairwise reduction of f(0) + ... + f(n-1).  The fixed
// recursion tree keeps results bitwise reproducible for a given n and keeps
// rounding growth logarithmic.
template <typename F>
auto pairwise_sum(std::size_t n, F&& f) -> decltype(f(std::size_t{0})) {
  using R = decltype(f(std::size_t{0}));
  struct Rec {
    static R run(std::size_t lo, std::size_t hi, F& g) {
      if (hi - lo <= 32) {
        R s = g(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) s += g(i);
        return s;
      }
      const std::size_t mid = lo + (hi - lo) / 2;
      return run(lo, mid, g) + run(mid, hi, g);
    }
  };
  if (n == 0) return R{};
  return Rec::run(0, n, f);
}

}  // namespace spinberry

#endif
