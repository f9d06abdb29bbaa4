#ifndef SPINBERRY_ERRORS_HPP
#define SPINBERRY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinberry {

// Base class for every domain error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A spin vector with |s| = 0 has no direction.
struct ZeroSpinVector : Error {
  ZeroSpinVector() : Error("zero spin vector has no direction") {}
};

// A two-component spinor with zero norm has no spin direction.
struct ZeroSpinor : Error {
  ZeroSpinor() : Error("zero spinor has no spin direction") {}
};

// The transverse component s_perp vanishes; the azimuthal phase is undefined.
struct PoleSingularity : Error {
  explicit PoleSingularity(const std::string& where)
      : Error("pole singularity (s_perp too small) in " + where) {}
};

// Momentum quadrature produced a non-finite or vanishing integral.
struct QuadratureDivergence : Error {
  explicit QuadratureDivergence(const std::string& what)
      : Error("momentum quadrature divergence: " + what) {}
};

// Normalization denominator of a spin expectation is not usable.
struct DegenerateDenominator : Error {
  DegenerateDenominator()
      : Error("spin expectation denominator is degenerate") {}
};

// Finite-difference step too coarse: estimated truncation error above 1%.
struct StepTooLarge : Error {
  explicit StepTooLarge(double estimate)
      : Error("finite-difference truncation estimate " +
              std::to_string(estimate) + " exceeds 1%") {}
};

// Consecutive contour states overlap too weakly for a discrete phase.
struct SparseContour : Error {
  explicit SparseContour(double modulus)
      : Error("contour too sparse: link overlap modulus " +
              std::to_string(modulus) + " <= 0.99") {}
};

// Contour crosses itself (best-effort detection).
struct SelfIntersection : Error {
  SelfIntersection() : Error("contour self-intersection detected") {}
};

// Triangle mesh fails orientation or boundary consistency checks.
struct MeshInconsistent : Error {
  explicit MeshInconsistent(const std::string& what)
      : Error("inconsistent surface mesh: " + what) {}
};

// A field direction along an evolution path is not a unit vector.
struct NonUnitDirection : Error {
  explicit NonUnitDirection(double norm)
      : Error("field direction has norm " + std::to_string(norm) +
              ", expected 1") {}
};

// Invalid run configuration (bad file, unknown key, out-of-range value).
struct ConfigError : Error {
  explicit ConfigError(const std::string& what)
      : Error("config error: " + what) {}
};

}  // namespace spinberry

#endif
