#ifndef SPINBERRY_BERRY_HPP
#define SPINBERRY_BERRY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <spinberry/contour.hpp>
#include <spinberry/dirac.hpp>
#include <spinberry/errors.hpp>
#include <spinberry/quadrature.hpp>
#include <spinberry/types.hpp>

// Geometric phase machinery over spin space by three independent routes:
// finite differences of family overlaps, the closed form obtained by
// differentiating the half-angle spinor map, and the full-strength monopole
// closed form kept as a comparison target.  The half-angle gauge is double
// valued in the azimuth, so smooth-branch line integrals and closed ray
// products may differ by exactly pi; nothing here reconciles that silently.

namespace spinberry {

enum class ConnectionSource { FiniteDifference, SpinorAnalytic, Monopole };

template <typename S>
struct ConnectionSample {
  Vec3<S> base = Vec3<S>::Zero();
  Vec3<S> value = Vec3<S>::Zero();    // certified value (extrapolated for fd)
  Vec3<S> central = Vec3<S>::Zero();  // plain central difference at step h
  S h = S(0);                         // step used; 0 for closed forms
  S truncation = S(0);                // residual truncation estimate
  S imag_residue = S(0);              // reality defect of the fd derivative
};

namespace detail {

template <typename S>
void require_off_axis(const Vec3<S>& s, const char* where) {
  if (s.norm() == S(0)) throw ZeroSpinVector();
  if (std::hypot(s[0], s[1]) < S(kPoleGuard) * s.norm())
    throw PoleSingularity(where);
}

}  // namespace detail

// Connection of the half-angle spinor map itself: the polar pull-back
// vanishes and the azimuthal one is cos(theta)/2, so in Cartesian form
// V = (cos(theta)/2) grad(phi) = {-s_y s_z, s_x s_z, 0} / (2 s_perp^2 |s|).
// Scales as V(lambda s) = V(s)/lambda.
template <typename S>
ConnectionSample<S> connection_spinor(const Vec3<S>& s) {
  detail::require_off_axis(s, "connection_spinor");
  const S norm = s.norm();
  const S perp2 = s[0] * s[0] + s[1] * s[1];
  const S coef = (s[2] / norm) / (S(2) * perp2);
  ConnectionSample<S> out;
  out.base = s;
  out.value = Vec3<S>(-s[1] * coef, s[0] * coef, S(0));
  out.central = out.value;
  return out;
}

// Full-strength monopole closed form {-s_y s_z, s_x s_z, 0} / (s_perp^2 |s|),
// exactly twice connection_spinor; kept as a literal comparison target.
template <typename S>
ConnectionSample<S> monopole_connection(const Vec3<S>& s) {
  detail::require_off_axis(s, "monopole_connection");
  ConnectionSample<S> out = connection_spinor(s);
  out.value *= S(2);
  out.central = out.value;
  return out;
}

// Curl of connection_spinor: the half-strength radial monopole -s/(2|s|^3).
template <typename S>
Vec3<S> spinor_curvature(const Vec3<S>& s) {
  const S norm = s.norm();
  if (norm == S(0)) throw ZeroSpinVector();
  return Vec3<S>(-s / (S(2) * norm * norm * norm));
}

// Full-strength radial monopole -s/|s|^3.
template <typename S>
Vec3<S> monopole_curvature(const Vec3<S>& s) {
  const S norm = s.norm();
  if (norm == S(0)) throw ZeroSpinVector();
  return Vec3<S>(-s / (norm * norm * norm));
}

// Finite-difference connection from normalized family overlaps:
// V_k = -Im[<psi(s)|psi(s + h e_k)> - <psi(s)|psi(s - h e_k)>] / (2h), with
// each overlap sign-aligned (real part made positive) so the double-valued
// azimuthal branch of the spinor map cannot inject spurious pi jumps.  The
// certified value extrapolates the (h, h/2) central differences; the reality
// defect of the derivative is extrapolated the same way.
template <typename S>
ConnectionSample<S> connection_fd(const FamilyOverlap<S>& ov, const Vec3<S>& s,
                                  S h = S(0)) {
  detail::require_off_axis(s, "connection_fd");
  const S norm = s.norm();
  const S step = h > S(0) ? h : S(1e-4) * norm;
  if (std::hypot(s[0], s[1]) <= S(2) * step)
    throw PoleSingularity("connection_fd step");
  const S n0 = ov.norm(s);
  const auto aligned = [&](const Vec3<S>& t) {
    Complex<S> o = ov.raw(s, t) / (n0 * ov.norm(t));
    if (o.real() < S(0)) o = -o;
    return o;
  };
  const auto central_at = [&](S hh, S* residue) {
    Vec3<S> v;
    S worst = S(0);
    for (int k = 0; k < 3; ++k) {
      Vec3<S> sp = s, sm = s;
      sp[k] += hh;
      sm[k] -= hh;
      const Complex<S> op = aligned(sp);
      const Complex<S> om = aligned(sm);
      v[k] = -(op.imag() - om.imag()) / (S(2) * hh);
      worst = std::max(worst, std::abs(op.real() - om.real()) / (S(2) * hh));
    }
    *residue = worst;
    return v;
  };
  S res1 = S(0), res2 = S(0);
  const Vec3<S> v1 = central_at(step, &res1);
  const Vec3<S> v2 = central_at(step / S(2), &res2);
  ConnectionSample<S> out;
  out.base = s;
  out.value = (S(4) * v2 - v1) / S(3);
  out.central = v1;
  out.h = step;
  out.truncation = (v2 - v1).norm() / S(3);
  out.imag_residue = std::abs(S(4) * res2 - res1) / S(3);
  if (out.truncation > S(0.01) * std::max(out.value.norm(), S(1e-8)))
    throw StepTooLarge(static_cast<double>(out.truncation));
  return out;
}

// Finite-difference curvature from plaquette loop phases: for each axis, the
// discrete phase around the centered square of half-width h in the transverse
// plane, divided by its area, then (h, h/2) extrapolated.  Loop phases are
// products of normalized overlaps and therefore gauge invariant; no branch
// alignment is needed.
template <typename S>
Vec3<S> curvature_fd(const FamilyOverlap<S>& ov, const Vec3<S>& s, S h = S(0)) {
  detail::require_off_axis(s, "curvature_fd");
  const S norm = s.norm();
  const S step = h > S(0) ? h : S(1e-3) * norm;
  if (std::hypot(s[0], s[1]) <= S(2) * step)
    throw PoleSingularity("curvature_fd step");
  const auto flux_at = [&](S hh) {
    Vec3<S> f;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const int k = (i + 2) % 3;
      Vec3<S> c[4] = {s, s, s, s};
      c[0][j] -= hh, c[0][k] -= hh;  // counterclockwise about axis i
      c[1][j] += hh, c[1][k] -= hh;
      c[2][j] += hh, c[2][k] += hh;
      c[3][j] -= hh, c[3][k] += hh;
      S nm[4];
      for (int q = 0; q < 4; ++q) nm[q] = ov.norm(c[q]);
      Complex<S> prod(1, 0);
      for (int q = 0; q < 4; ++q) {
        const int r = (q + 1) % 4;
        prod *= ov.raw(c[q], c[r]) / (nm[q] * nm[r]);
      }
      f[i] = -std::arg(prod) / (S(4) * hh * hh);
    }
    return f;
  };
  const Vec3<S> f1 = flux_at(step);
  const Vec3<S> f2 = flux_at(step / S(2));
  const Vec3<S> value = (S(4) * f2 - f1) / S(3);
  const S truncation = (f2 - f1).norm() / S(3);
  if (truncation > S(0.01) * std::max(value.norm(), S(1e-8)))
    throw StepTooLarge(static_cast<double>(truncation));
  return value;
}

// Composite trapezoid of a connection field along the closed polyline.
template <typename S, typename Field>
S phase_line_integral(const ParameterContour<S>& contour, Field&& field) {
  contour.validate(true);
  const std::size_t n = contour.size();
  std::vector<Vec3<S>> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = field(contour.point(k));
  return pairwise_sum(n, [&](std::size_t k) {
    const Vec3<S>& a = contour.point(k);
    const Vec3<S>& b = contour.point((k + 1) % n);
    return S(0.5) * (v[k] + v[(k + 1) % n]).dot(b - a);
  });
}

template <typename S>
S phase_line_integral(const ParameterContour<S>& contour, ConnectionSource src,
                      const FamilyOverlap<S>* ov = nullptr, S h = S(0)) {
  switch (src) {
    case ConnectionSource::SpinorAnalytic:
      return phase_line_integral(contour, [](const Vec3<S>& s) {
        return connection_spinor(s).value;
      });
    case ConnectionSource::Monopole:
      return phase_line_integral(contour, [](const Vec3<S>& s) {
        return monopole_connection(s).value;
      });
    case ConnectionSource::FiniteDifference:
      break;
  }
  if (!ov) throw Error("finite-difference line integral needs a family");
  return phase_line_integral(
      contour, [&](const Vec3<S>& s) { return connection_fd(*ov, s, h).value; });
}

// Normalized overlaps between consecutive contour states, closing with the
// first.  Moduli stay near 1 only when neighboring states nearly coincide.
template <typename S>
std::vector<Complex<S>> discrete_links(const ParameterContour<S>& contour,
                                       const FamilyOverlap<S>& ov) {
  contour.validate(true);
  const std::size_t n = contour.size();
  std::vector<S> nm(n);
  for (std::size_t k = 0; k < n; ++k) nm[k] = ov.norm(contour.point(k));
  std::vector<Complex<S>> links(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = (k + 1) % n;
    links[k] = ov.raw(contour.point(k), contour.point(r)) / (nm[k] * nm[r]);
  }
  return links;
}

// Gauge-invariant discrete phase: negative argument of the product of the
// link overlaps around the loop, each reduced to unit modulus.  Principal
// value in (-pi, pi].  Per-state phase changes cancel telescopically, so the
// result is exactly gauge invariant.
template <typename S>
S phase_from_links(const std::vector<Complex<S>>& links) {
  Complex<S> prod(1, 0);
  for (const Complex<S>& z : links) {
    const S mod = std::abs(z);
    if (!(mod > S(0.99))) throw SparseContour(static_cast<double>(mod));
    prod *= z / mod;
  }
  return wrap_angle(-std::arg(prod));
}

template <typename S>
S phase_discrete(const ParameterContour<S>& contour,
                 const FamilyOverlap<S>& ov) {
  return phase_from_links(discrete_links(contour, ov));
}

// Flux of a curvature field through the mesh: per-triangle centroid value
// dotted with the flat area vector.  Second-order in the mesh spacing.
template <typename S, typename Field>
S surface_flux(const SurfaceCapMesh<S>& mesh, Field&& curv) {
  mesh.validate();
  return pairwise_sum(mesh.triangles.size(), [&](std::size_t t) {
    const Vec3<S>& a = mesh.vertices[mesh.triangles[t][0]];
    const Vec3<S>& b = mesh.vertices[mesh.triangles[t][1]];
    const Vec3<S>& c = mesh.vertices[mesh.triangles[t][2]];
    const Vec3<S> area = S(0.5) * (b - a).cross(c - a);
    return S(curv(Vec3<S>((a + b + c) / S(3))).dot(area));
  });
}

// Small-plaquette surface phase for the finite-difference route: the sum of
// per-triangle discrete loop phases.  Interior links cancel pairwise, so for
// meshes with modest per-triangle phases this telescopes to the boundary ray
// product while remaining a genuine surface sum.
template <typename S>
S surface_loop_phase(const SurfaceCapMesh<S>& mesh,
                     const FamilyOverlap<S>& ov) {
  mesh.validate();
  std::vector<S> nm(mesh.vertices.size());
  for (std::size_t i = 0; i < nm.size(); ++i) nm[i] = ov.norm(mesh.vertices[i]);
  return pairwise_sum(mesh.triangles.size(), [&](std::size_t t) {
    Complex<S> prod(1, 0);
    for (int e = 0; e < 3; ++e) {
      const std::size_t u = mesh.triangles[t][e];
      const std::size_t v = mesh.triangles[t][(e + 1) % 3];
      const Complex<S> z = ov.raw(mesh.vertices[u], mesh.vertices[v]) /
                           (nm[u] * nm[v]);
      if (!(std::abs(z) > S(0.1)))
        throw MeshInconsistent("triangle edge states nearly orthogonal");
      prod *= z;
    }
    const S phase = -std::arg(prod);
    if (std::abs(phase) > pi_v<S> / S(2))
      throw MeshInconsistent("triangle loop phase too large");
    return phase;
  });
}

template <typename S>
S phase_stokes(const SurfaceCapMesh<S>& mesh, ConnectionSource src,
               const FamilyOverlap<S>* ov = nullptr) {
  switch (src) {
    case ConnectionSource::SpinorAnalytic:
      return surface_flux(mesh,
                          [](const Vec3<S>& s) { return spinor_curvature(s); });
    case ConnectionSource::Monopole:
      return surface_flux(
          mesh, [](const Vec3<S>& s) { return monopole_curvature(s); });
    case ConnectionSource::FiniteDifference:
      break;
  }
  if (!ov) throw Error("finite-difference surface phase needs a family");
  return surface_loop_phase(mesh, *ov);
}

// Total plaquette loop phase over a closed latitude-longitude sphere, the
// discrete field strength summed over the whole surface.  Quantized at
// 2 pi x (integer) up to roundoff; the polar rows collapse to single points
// and contribute identity links.
template <typename S>
S sphere_plaquette_flux(const FamilyOverlap<S>& ov, std::size_t n_polar,
                        std::size_t n_azimuth, S radius = S(1)) {
  if (n_polar < 2 || n_azimuth < 3)
    throw Error("sphere grid needs at least 2 polar and 3 azimuthal cells");
  std::vector<std::vector<Vec3<S>>> ring(n_polar + 1);
  std::vector<std::vector<S>> nm(n_polar + 1);
  for (std::size_t i = 0; i <= n_polar; ++i) {
    const S th = pi_v<S> * S(i) / S(n_polar);
    const std::size_t cols = (i == 0 || i == n_polar) ? 1 : n_azimuth;
    ring[i].reserve(cols);
    nm[i].reserve(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      const S ph = S(2) * pi_v<S> * S(j) / S(n_azimuth);
      ring[i].emplace_back(radius * std::sin(th) * std::cos(ph),
                           radius * std::sin(th) * std::sin(ph),
                           radius * std::cos(th));
      nm[i].push_back(ov.norm(ring[i].back()));
    }
  }
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t {
    return j % ring[i].size();
  };
  return pairwise_sum(n_polar * n_azimuth, [&](std::size_t cell) {
    const std::size_t i = cell / n_azimuth;
    const std::size_t j = cell % n_azimuth;
    // Corners counterclockwise seen from outside: south edge then east edge.
    const std::size_t ci[4] = {i, i + 1, i + 1, i};
    const std::size_t cj[4] = {j, j, j + 1, j + 1};
    Complex<S> prod(1, 0);
    for (int q = 0; q < 4; ++q) {
      const int r = (q + 1) % 4;
      const std::size_t iu = ci[q], ju = at(ci[q], cj[q]);
      const std::size_t iv = ci[r], jv = at(ci[r], cj[r]);
      const Complex<S> z = ov.raw(ring[iu][ju], ring[iv][jv]) /
                           (nm[iu][ju] * nm[iv][jv]);
      prod *= z / std::abs(z);
    }
    return -std::arg(prod);
  });
}

// All phase routes on one contour, with residuals.  The smooth-branch line
// integrals and the surface routes may legitimately differ by an integer
// multiple of pi (the axis carries the compensating string flux), so each
// Stokes residual is reported as the distance to the nearest multiple of pi
// together with that multiple.
template <typename S>
struct PhaseReport {
  S line_fd = S(0);
  S line_spinor = S(0);
  S line_monopole = S(0);
  S discrete = S(0);  // principal value in (-pi, pi]
  S stokes_fd = S(0);
  S stokes_spinor = S(0);
  S stokes_monopole = S(0);
  S solid = S(0);  // oriented solid angle, steradians
  S ratio_discrete_over_solid = S(0);
  S ratio_discrete_over_half_solid = S(0);  // discrete / (-solid/2)
  S residual_line_fd_spinor = S(0);
  S residual_discrete_half_solid = S(0);
  S residual_stokes_fd = S(0);
  S residual_stokes_spinor = S(0);
  S residual_stokes_monopole = S(0);
  long offset_stokes_fd = 0;  // integer multiples of pi in line - stokes
  long offset_stokes_spinor = 0;
  long offset_stokes_monopole = 0;
};

struct PhaseOptions {
  std::size_t fd_line_points = 640;   // fd line route subsample of the contour
  std::size_t mesh_azimuth = 1024;    // boundary points of the flux mesh
  std::size_t mesh_rings = 0;         // 0: chosen from the cap opening angle
  std::size_t fd_mesh_azimuth = 1024; // fan mesh boundary for the loop phases
  double fd_step = 0;                 // 0: default step
};

namespace detail {

// Every n/m-th point of the contour (orientation resolved), m <= n.
template <typename S>
ParameterContour<S> subsample(const ParameterContour<S>& c, std::size_t m) {
  const std::size_t n = c.size();
  if (m >= n) {
    ParameterContour<S> out;
    out.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.points.push_back(c.point(k));
    return out;
  }
  ParameterContour<S> out;
  out.points.reserve(m);
  for (std::size_t k = 0; k < m; ++k) out.points.push_back(c.point(k * n / m));
  return out;
}

template <typename S>
std::size_t auto_rings(const ParameterContour<S>& c) {
  std::vector<Vec3<S>> dir(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) dir[k] = c.point(k).normalized();
  Vec3<S> axis = contour_axis(dir);
  if (axis.norm() < S(1e-12)) return 64;
  axis.normalize();
  S opening = S(0);
  for (const auto& d : dir)
    opening = std::max(opening, std::acos(std::clamp(axis.dot(d), S(-1), S(1))));
  const auto rings = static_cast<std::size_t>(std::ceil(opening / S(0.004)));
  return std::clamp<std::size_t>(rings, 64, 512);
}

}  // namespace detail

template <typename S>
PhaseReport<S> compute_phase_report(const FamilyOverlap<S>& ov,
                                    const ParameterContour<S>& contour,
                                    const PhaseOptions& opt = {}) {
  contour.validate(true);
  PhaseReport<S> rep;
  rep.solid = solid_angle(contour);
  rep.line_spinor =
      phase_line_integral(contour, ConnectionSource::SpinorAnalytic, &ov);
  rep.line_monopole =
      phase_line_integral(contour, ConnectionSource::Monopole, &ov);
  const ParameterContour<S> fd_contour =
      detail::subsample(contour, opt.fd_line_points);
  rep.line_fd = phase_line_integral(fd_contour, ConnectionSource::FiniteDifference,
                                    &ov, S(opt.fd_step));
  rep.discrete = phase_discrete(contour, ov);

  const ParameterContour<S> mesh_boundary =
      detail::subsample(contour, opt.mesh_azimuth);
  const std::size_t rings =
      opt.mesh_rings ? opt.mesh_rings : detail::auto_rings(mesh_boundary);
  const SurfaceCapMesh<S> mesh = build_cap_mesh(mesh_boundary, rings);
  rep.stokes_spinor = phase_stokes<S>(mesh, ConnectionSource::SpinorAnalytic);
  rep.stokes_monopole = phase_stokes<S>(mesh, ConnectionSource::Monopole);
  const SurfaceCapMesh<S> fd_mesh =
      build_cap_mesh(detail::subsample(contour, opt.fd_mesh_azimuth), 1);
  rep.stokes_fd = phase_stokes(fd_mesh, ConnectionSource::FiniteDifference, &ov);

  rep.ratio_discrete_over_solid =
      rep.solid != S(0) ? rep.discrete / rep.solid : S(0);
  rep.ratio_discrete_over_half_solid =
      rep.solid != S(0) ? rep.discrete / (-rep.solid / S(2)) : S(0);
  rep.residual_line_fd_spinor = std::abs(rep.line_fd - rep.line_spinor);
  rep.residual_discrete_half_solid =
      std::abs(wrap_angle(rep.discrete - (-rep.solid / S(2))));
  rep.residual_stokes_fd = std::abs(
      residual_mod_pi(rep.line_fd - rep.stokes_fd, &rep.offset_stokes_fd));
  rep.residual_stokes_spinor = std::abs(residual_mod_pi(
      rep.line_spinor - rep.stokes_spinor, &rep.offset_stokes_spinor));
  rep.residual_stokes_monopole = std::abs(residual_mod_pi(
      rep.line_monopole - rep.stokes_monopole, &rep.offset_stokes_monopole));
  return rep;
}

}  // namespace spinberry

#endif
