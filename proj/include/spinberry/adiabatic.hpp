#ifndef SPINBERRY_ADIABATIC_HPP
#define SPINBERRY_ADIABATIC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <spinberry/clifford.hpp>
#include <spinberry/contour.hpp>
#include <spinberry/errors.hpp>
#include <spinberry/spin_param.hpp>
#include <spinberry/types.hpp>

// Two-level simulator for a spin coupled to a slowly steered unit field:
// H(t) = -(delta/2) n(t).sigma, the magnetic-moment sign, so the aligned
// state is the energy minimum.  Evolution uses the exact exponential of the
// midpoint generator per step, which is unitary to roundoff.

namespace spinberry {

template <typename S>
struct FieldPath {
  std::function<Vec3<S>(S)> direction;  // unit field direction at time t
  S delta = S(1);                       // level splitting |delta|
  S duration = S(1);
  void validate() const {
    if (!direction) throw Error("field path has no direction callable");
    if (!(delta > S(0)) || !std::isfinite(delta))
      throw Error("field path splitting must be positive and finite");
    if (!(duration > S(0)) || !std::isfinite(duration))
      throw Error("field path duration must be positive and finite");
  }
};

// Field sweeping a cone of half-angle theta about +z once over [0, T].
template <typename S>
FieldPath<S> cone_path(S theta, S delta, S duration) {
  if (!(theta >= S(0) && theta <= pi_v<S>))
    throw Error("cone half-angle must lie in [0, pi]");
  const S st = std::sin(theta);
  const S ct = std::cos(theta);
  FieldPath<S> path;
  path.delta = delta;
  path.duration = duration;
  path.direction = [st, ct, duration](S t) {
    const S phi = S(2) * pi_v<S> * t / duration;
    return Vec3<S>(st * std::cos(phi), st * std::sin(phi), ct);
  };
  path.validate();
  return path;
}

namespace detail {

template <typename S>
Vec3<S> slerp_dir(const Vec3<S>& a, const Vec3<S>& b, S u) {
  const S c = std::clamp(a.dot(b), S(-1), S(1));
  const S alpha = std::acos(c);
  if (alpha < S(1e-9)) return Vec3<S>(((S(1) - u) * a + u * b).normalized());
  const S sa = std::sin(alpha);
  return Vec3<S>((std::sin((S(1) - u) * alpha) * a + std::sin(u * alpha) * b) /
                 sa);
}

}  // namespace detail

// Closed field path tracing the contour once, great-circle interpolation
// between consecutive vertices, uniform time per segment.
template <typename S>
FieldPath<S> interpolated_path(const ParameterContour<S>& contour, S delta,
                               S duration) {
  contour.validate(false);
  const std::size_t n = contour.size();
  std::vector<Vec3<S>> dir(n);
  for (std::size_t k = 0; k < n; ++k) dir[k] = contour.point(k).normalized();
  FieldPath<S> path;
  path.delta = delta;
  path.duration = duration;
  path.direction = [dir = std::move(dir), n, duration](S t) {
    S s = t / duration;
    s -= std::floor(s);  // closed path: t = T maps back to the start
    const S x = s * S(n);
    auto seg = static_cast<std::size_t>(x);
    if (seg >= n) seg = n - 1;
    return detail::slerp_dir(dir[seg], dir[(seg + 1) % n], x - S(seg));
  };
  path.validate();
  return path;
}

// Energy minimum of -(delta/2) n.sigma: the spinor aligned with n.
template <typename S>
Vec2c<S> lower_eigenstate(const Vec3<S>& n) {
  return canonical_spinor(n);
}

template <typename S>
struct EvolutionResult {
  Vec2c<S> psi_final = Vec2c<S>::Zero();
  S total_principal = S(0);   // arg<psi(0)|psi(T)> in (-pi, pi]
  S total_unwrapped = S(0);   // the same phase tracked continuously
  long winding = 0;           // full turns hidden by the principal value
  S dynamical_eigenvalue = S(0);    // -int E_lower dt = +delta T / 2
  S dynamical_expectation = S(0);   // -int <psi|H|psi> dt, midpoint rule
  S geometric = S(0);               // total minus eigenvalue phase, principal
  S geometric_expectation = S(0);   // total minus expectation phase, principal
  S fidelity = S(0);  // overlap squared with the final-field minimum
  bool reliable = false;        // fidelity >= 0.99
};

// Steps the state with the exact exponential of the midpoint generator:
// exp(i (delta dt / 2) n.sigma) = cos(a) I + i sin(a) n.sigma.  Phase
// unwrapping follows <psi(0)|psi(t)> step by step; increments stay far from
// +-pi whenever the step resolves the splitting.
template <typename S>
EvolutionResult<S> evolve(const FieldPath<S>& path, const Vec2c<S>& psi0,
                          std::size_t steps) {
  path.validate();
  if (steps == 0) throw Error("evolution needs at least one step");
  const S nrm0 = psi0.norm();
  if (!(nrm0 > S(0))) throw ZeroSpinor();
  const Vec2c<S> start = psi0 / nrm0;
  Vec2c<S> psi = start;
  const S dt = path.duration / S(steps);
  const S a = path.delta * dt / S(2);
  const S ca = std::cos(a);
  const S sa = std::sin(a);
  const Complex<S> isa(S(0), sa);
  S unwrapped = S(0);
  S prev_arg = S(0);  // arg<start|psi> begins at 0
  S expectation_sum = S(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const S t_mid = (S(k) + S(0.5)) * dt;
    const Vec3<S> n = path.direction(t_mid);
    const S nn = n.norm();
    if (std::abs(nn - S(1)) > S(1e-12))
      throw NonUnitDirection(static_cast<double>(nn));
    const Mat2c<S> ns = pauli_dot(n);
    // <H> commutes with the step, so the pre-step value is the midpoint one.
    expectation_sum +=
        -(path.delta / S(2)) * (psi.adjoint() * ns * psi)(0).real() * dt;
    psi = Vec2c<S>(ca * psi + isa * (ns * psi));
    const S cur_arg = std::arg(start.dot(psi));
    unwrapped += wrap_angle(cur_arg - prev_arg);
    prev_arg = cur_arg;
  }
  EvolutionResult<S> out;
  out.psi_final = psi;
  out.total_principal = wrap_angle(prev_arg);
  out.total_unwrapped = unwrapped;
  out.winding = std::lround((unwrapped - out.total_principal) /
                            (S(2) * pi_v<S>));
  out.dynamical_eigenvalue = path.delta * path.duration / S(2);
  out.dynamical_expectation = -expectation_sum;
  out.geometric = wrap_angle(out.total_principal - out.dynamical_eigenvalue);
  out.geometric_expectation =
      wrap_angle(out.total_principal - out.dynamical_expectation);
  const Vec2c<S> target = lower_eigenstate(path.direction(path.duration));
  out.fidelity = std::norm(target.dot(psi));
  out.reliable = out.fidelity >= S(0.99);
  return out;
}

template <typename S>
struct SweepResult {
  std::vector<S> times;
  std::vector<S> errors;    // |geometric - (-Omega/2)| per duration
  S exponent = S(0);        // least-squares slope of log error vs log time
  std::vector<EvolutionResult<S>> runs;
};

// Convergence of the geometric phase toward the half solid angle as the
// sweep slows down.  Same step count for every duration, so the slowest run
// is resolved at least as finely as the fastest.
template <typename S>
SweepResult<S> geometric_phase_sweep(S theta, S delta,
                                     const std::vector<S>& times,
                                     std::size_t steps) {
  if (times.size() < 2)
    throw Error("sweep needs at least two durations");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error("sweep durations must increase");
  const S target = -pi_v<S> * (S(1) - std::cos(theta));
  SweepResult<S> out;
  out.times = times;
  out.errors.reserve(times.size());
  out.runs.reserve(times.size());
  for (S duration : times) {
    const FieldPath<S> path = cone_path(theta, delta, duration);
    const Vec2c<S> psi0 = lower_eigenstate(path.direction(S(0)));
    EvolutionResult<S> run = evolve(path, psi0, steps);
    out.errors.push_back(std::abs(wrap_angle(run.geometric - target)));
    out.runs.push_back(std::move(run));
  }
  S sx = S(0), sy = S(0), sxx = S(0), sxy = S(0);
  const auto m = static_cast<S>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const S x = std::log(out.times[i]);
    const S y = std::log(std::max(out.errors[i], S(1e-300)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace spinberry

#endif
