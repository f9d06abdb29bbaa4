#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <spinberry/adiabatic.hpp>
#include <spinberry/berry.hpp>
#include <spinberry/clifford.hpp>
#include <spinberry/errors.hpp>
#include <spinberry/random.hpp>
#include <spinberry/spin_param.hpp>

namespace spinberry {

namespace {

std::string num(double v) { return nlohmann::json(v).dump(); }

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// The acceptance statements pin the family: unit mass, unit-width Gaussian
// profile, canonical spinor map.  Configuration varies resolutions and seed.
DiracFamily<double> reference_family() { return DiracFamily<double>{}; }

CriterionResult expectation_reduction(const RunConfig& cfg,
                                      const QuadratureSpec& quad) {
  Timer timer;
  const DiracFamily<double> fam = reference_family();
  Rng rng(cfg.seed + 1);
  double worst = 0;
  for (std::uint64_t i = 0; i < cfg.acceptance.expectation_samples; ++i) {
    const Vec3d s = rng.unit_sphere();
    const Vec2cd w = canonical_spinor(s);
    const SpinExpectation<double> rep = spin_expectation_report(fam, w, quad);
    Vec3d oracle;
    const double den = w.squaredNorm();
    for (int k = 0; k < 3; ++k)
      oracle[k] = (w.adjoint() * pauli(k) * w)(0).real() / den;
    worst = std::max(worst, (rep.covariant - oracle).norm() / oracle.norm());
  }
  CriterionResult r;
  r.id = 1;
  r.name = "expectation_reduction";
  r.measured = worst;
  r.tolerance = 1e-8;
  r.pass = worst < r.tolerance;
  r.detail = "worst relative error over " +
             std::to_string(cfg.acceptance.expectation_samples) +
             " random directions";
  r.seconds = timer.seconds();
  return r;
}

CriterionResult overlap_factorization(const RunConfig& cfg,
                                      const FamilyOverlap<double>& ov) {
  Timer timer;
  Rng rng(cfg.seed + 2);
  std::vector<Complex<double>> ratios;
  while (ratios.size() < cfg.acceptance.overlap_pairs) {
    const Vec3d s1 = rng.unit_sphere();
    const Vec3d s2 = rng.unit_sphere();
    const Complex<double> spinor_overlap =
        canonical_spinor(s1).dot(canonical_spinor(s2));
    if (std::abs(spinor_overlap) < 1e-3) continue;  // near-antipodal pair
    ratios.push_back(ov.raw(s1, s2) / spinor_overlap);
  }
  Complex<double> mean(0, 0);
  for (const auto& z : ratios) mean += z;
  mean /= static_cast<double>(ratios.size());
  double worst = 0;
  for (const auto& z : ratios)
    worst = std::max(worst, std::abs(z - mean) / std::abs(mean));
  CriterionResult r;
  r.id = 2;
  r.name = "overlap_factorization";
  r.measured = worst;
  r.tolerance = 1e-8;
  r.pass = worst < r.tolerance;
  r.detail = "proportionality constant " + num(mean.real()) + " + " +
             num(mean.imag()) + "i over " +
             std::to_string(cfg.acceptance.overlap_pairs) + " pairs";
  r.seconds = timer.seconds();
  return r;
}

CriterionResult connection_cross_check(const RunConfig& cfg,
                                       const FamilyOverlap<double>& ov) {
  Timer timer;
  Rng rng(cfg.seed + 3);
  const double h = cfg.fd_step > 0 ? cfg.fd_step : 1e-4;
  double worst = 0, worst_trunc = 0, worst_residue = 0;
  for (std::uint64_t i = 0; i < cfg.acceptance.connection_samples; ++i) {
    const Vec3d s = rng.unit_sphere_guarded(0.1, 0.0);
    const ConnectionSample<double> fd = connection_fd(ov, s, h);
    const ConnectionSample<double> an = connection_spinor(s);
    worst = std::max(worst, (fd.value - an.value).norm());
    worst_trunc = std::max(worst_trunc, fd.truncation);
    worst_residue = std::max(worst_residue, fd.imag_residue);
  }
  CriterionResult r;
  r.id = 3;
  r.name = "connection_cross_check";
  r.measured = worst;
  r.tolerance = 1e-6;
  r.pass = worst < r.tolerance;
  r.detail = "step " + num(h) + ", worst truncation " + num(worst_trunc) +
             ", worst reality defect " + num(worst_residue);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult connection_direction_ratio(const RunConfig& cfg,
                                           const FamilyOverlap<double>& ov) {
  Timer timer;
  Rng rng(cfg.seed + 4);
  const double h = cfg.fd_step > 0 ? cfg.fd_step : 1e-4;
  double worst_sin = 0;
  std::vector<double> ratios;
  for (std::uint64_t i = 0; i < cfg.acceptance.direction_samples; ++i) {
    const Vec3d s = rng.unit_sphere_guarded(0.1, 0.05);
    const Vec3d v = connection_fd(ov, s, h).value;
    const Vec3d m = monopole_connection(s).value;
    worst_sin =
        std::max(worst_sin, v.cross(m).norm() / (v.norm() * m.norm()));
    for (int k = 0; k < 2; ++k)  // z components vanish identically
      if (std::abs(m[k]) >= 0.1 * m.norm()) ratios.push_back(v[k] / m[k]);
  }
  double mean = 0;
  for (double q : ratios) mean += q;
  mean /= static_cast<double>(ratios.size());
  double var = 0;
  for (double q : ratios) var += (q - mean) * (q - mean);
  const double spread =
      std::sqrt(var / static_cast<double>(ratios.size())) / std::abs(mean);
  CriterionResult r;
  r.id = 4;
  r.name = "connection_direction_ratio";
  r.measured = spread;
  r.tolerance = 1e-6;
  r.pass = worst_sin < 1e-8 && spread < r.tolerance;
  r.detail = "componentwise ratio to the full-strength closed form " +
             num(mean) + ", worst |sin angle| " + num(worst_sin);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult curvature_and_flux(const RunConfig& cfg,
                                   const FamilyOverlap<double>& ov) {
  Timer timer;
  Rng rng(cfg.seed + 5);
  const double h = cfg.plaquette_step > 0 ? cfg.plaquette_step : 1e-3;
  double worst_sin = 0;
  for (std::uint64_t i = 0; i < cfg.acceptance.curvature_samples; ++i) {
    const Vec3d s = rng.unit_sphere_guarded(0.1, 0.05);
    const Vec3d f = curvature_fd(ov, s, h);
    const Vec3d inward = -s;
    worst_sin = std::max(
        worst_sin, f.cross(inward).norm() / (f.norm() * inward.norm()));
  }
  const double sphere = sphere_plaquette_flux(
      ov, cfg.acceptance.sphere_polar, cfg.acceptance.sphere_azimuthal);
  const double sphere_err = std::abs(sphere - (-2.0 * kPi));
  // Independent direct quadrature of the full-strength closed form over the
  // unit sphere, no curl or overlap machinery involved.
  std::vector<double> xc, wc;
  gauss_legendre(48, xc, wc);
  double direct = 0;
  for (int i = 0; i < 48; ++i) {
    const double ct = xc[static_cast<std::size_t>(i)];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    double row = 0;
    for (int j = 0; j < 48; ++j) {
      const double ph = 2.0 * kPi * j / 48.0;
      const Vec3d rhat(st * std::cos(ph), st * std::sin(ph), ct);
      row += monopole_curvature(rhat).dot(rhat);
    }
    direct += wc[static_cast<std::size_t>(i)] * row * (2.0 * kPi / 48.0);
  }
  const double direct_err = std::abs(direct - (-4.0 * kPi));
  CriterionResult r;
  r.id = 5;
  r.name = "curvature_and_flux";
  r.measured = sphere_err;
  r.tolerance = 1e-4;
  r.pass = worst_sin < 1e-8 && sphere_err < 1e-4 && direct_err < 1e-10;
  r.detail = "worst |sin angle| to the inward radial " + num(worst_sin) +
             ", whole-sphere plaquette flux " + num(sphere) +
             ", direct closed-form flux " + num(direct);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult stokes_consistency(const RunConfig& cfg,
                                   const FamilyOverlap<double>& ov) {
  Timer timer;
  const double angles[3] = {kPi / 6, kPi / 3, kPi / 2};
  const double h = cfg.fd_step > 0 ? cfg.fd_step : 1e-4;
  double worst = 0;
  std::ostringstream offsets;
  for (int a = 0; a < 3; ++a) {
    const double theta = angles[a];
    const auto contour = ParameterContour<double>::circle(
        theta, cfg.acceptance.stokes_line_points);
    const auto fd_contour = ParameterContour<double>::circle(
        theta, cfg.acceptance.stokes_fd_line_points);
    const double line_sp =
        phase_line_integral(contour, ConnectionSource::SpinorAnalytic);
    const double line_mo =
        phase_line_integral(contour, ConnectionSource::Monopole);
    const double line_fd = phase_line_integral(
        fd_contour, ConnectionSource::FiniteDifference, &ov, h);
    const std::size_t rings =
        cfg.acceptance.stokes_mesh_rings
            ? cfg.acceptance.stokes_mesh_rings
            : std::clamp<std::size_t>(
                  static_cast<std::size_t>(std::ceil(theta / 0.004)), 64, 512);
    const auto mesh = build_cap_mesh(contour, rings);
    const double st_sp =
        phase_stokes(mesh, ConnectionSource::SpinorAnalytic);
    const double st_mo = phase_stokes(mesh, ConnectionSource::Monopole);
    const auto fan = build_cap_mesh(contour, 1);
    const double st_fd =
        phase_stokes(fan, ConnectionSource::FiniteDifference, &ov);
    long mult_fd = 0, mult_sp = 0, mult_mo = 0;
    worst = std::max(worst, std::abs(residual_mod_pi(line_fd - st_fd, &mult_fd)));
    worst = std::max(worst, std::abs(residual_mod_pi(line_sp - st_sp, &mult_sp)));
    worst = std::max(worst, std::abs(residual_mod_pi(line_mo - st_mo, &mult_mo)));
    if (a) offsets << "; ";
    offsets << "theta " << num(theta) << ": fd " << mult_fd << ", spinor "
            << mult_sp << ", monopole " << mult_mo;
  }
  CriterionResult r;
  r.id = 6;
  r.name = "stokes_consistency";
  r.measured = worst;
  r.tolerance = 1e-4;
  r.pass = worst < r.tolerance;
  r.detail = "line minus surface, nearest multiple of pi removed; axis string "
             "multiples: " +
             offsets.str();
  r.seconds = timer.seconds();
  return r;
}

CriterionResult solid_angle_check(const RunConfig& cfg) {
  Timer timer;
  double worst_circle = 0;
  for (const double theta : {kPi / 6, kPi / 3, kPi / 2}) {
    const auto contour =
        ParameterContour<double>::circle(theta, cfg.acceptance.solid_points);
    const double target = 2.0 * kPi * (1.0 - std::cos(theta));
    worst_circle =
        std::max(worst_circle, std::abs(solid_angle(contour) - target));
  }
  const double octant_err =
      std::abs(solid_angle(ParameterContour<double>::octant()) - kPi / 2);
  CriterionResult r;
  r.id = 7;
  r.name = "solid_angle";
  r.measured = worst_circle;
  r.tolerance = 1e-8;
  r.pass = worst_circle < 1e-8 && octant_err < 1e-10;
  r.detail = "octant deviation " + num(octant_err);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult discrete_phase(const RunConfig& cfg,
                               const FamilyOverlap<double>& ov) {
  Timer timer;
  Rng rng(cfg.seed + 8);
  const auto contour = ParameterContour<double>::circle(
      kPi / 3, cfg.acceptance.discrete_points);
  const auto links = discrete_links(contour, ov);
  const double gamma = phase_from_links(links);
  const double value_err = std::abs(gamma - (-kPi / 2));
  // Random per-state gauge phases enter each link as a twist and must cancel.
  const std::size_t n = links.size();
  std::vector<Complex<double>> twist(n);
  for (std::size_t k = 0; k < n; ++k)
    twist[k] = std::polar(1.0, rng.uniform(-kPi, kPi));
  std::vector<Complex<double>> twisted(n);
  for (std::size_t k = 0; k < n; ++k)
    twisted[k] = links[k] * std::conj(twist[k]) * twist[(k + 1) % n];
  const double gauge_err = std::abs(phase_from_links(twisted) - gamma);
  const double reversed = phase_discrete(contour.reversed(), ov);
  const double reversal_err = std::abs(reversed + gamma);
  CriterionResult r;
  r.id = 8;
  r.name = "discrete_phase";
  r.measured = value_err;
  r.tolerance = 1e-4;
  r.pass = value_err < 1e-4 && gauge_err < 1e-12 && reversal_err < 1e-12;
  r.detail = "gauge twist deviation " + num(gauge_err) +
             ", orientation reversal deviation " + num(reversal_err);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult adiabatic_sweep(const RunConfig& cfg) {
  Timer timer;
  const auto& ad = cfg.adiabatic;
  const SweepResult<double> sweep = geometric_phase_sweep(
      ad.theta, ad.delta, ad.sweep_durations, ad.steps);
  const double slow_err = sweep.errors.back();
  const bool exponent_ok =
      sweep.exponent > -1.2 && sweep.exponent < -0.8;
  // Rotating-field closed solution: one full turn in unit time, any speed.
  const FieldPath<double> fast = cone_path(ad.theta, ad.delta, 1.0);
  const Vec2cd psi0 = lower_eigenstate(fast.direction(0.0));
  const EvolutionResult<double> run =
      evolve(fast, psi0, cfg.acceptance.rabi_steps);
  const Vec3d beff =
      ad.delta * fast.direction(0.0) + 2.0 * kPi * Vec3d::UnitZ();
  const double b = beff.norm();
  const Mat2cd u = std::cos(b / 2) * Mat2cd::Identity() +
                   Complex<double>(0, std::sin(b / 2)) *
                       pauli_dot(Vec3d(beff / b));
  const Vec2cd exact = -(u * psi0);
  const double rabi_err = (run.psi_final - exact).norm();
  CriterionResult r;
  r.id = 9;
  r.name = "adiabatic_sweep";
  r.measured = slow_err;
  r.tolerance = 2e-2;
  r.pass = slow_err < r.tolerance && exponent_ok && rabi_err < 1e-8;
  r.detail = "fitted error exponent " + num(sweep.exponent) +
             ", rotating-field closed-solution deviation " + num(rabi_err);
  r.seconds = timer.seconds();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg) {
  const QuadratureSpec quad = quadrature_from_config(cfg);
  const FamilyOverlap<double> ov(reference_family(), quad);
  std::vector<CriterionResult> out;
  out.push_back(expectation_reduction(cfg, quad));
  out.push_back(overlap_factorization(cfg, ov));
  out.push_back(connection_cross_check(cfg, ov));
  out.push_back(connection_direction_ratio(cfg, ov));
  out.push_back(curvature_and_flux(cfg, ov));
  out.push_back(stokes_consistency(cfg, ov));
  out.push_back(solid_angle_check(cfg));
  out.push_back(discrete_phase(cfg, ov));
  out.push_back(adiabatic_sweep(cfg));
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

void append_criteria(Report& report,
                     const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "c%02d_", r.id);
    report.add(prefix + r.name + "_pass", r.pass, r.detail);
    report.add(prefix + r.name + "_measured", r.measured);
    report.add(prefix + r.name + "_tolerance", r.tolerance);
  }
}

std::string criterion_line(const CriterionResult& r) {
  char head[16];
  std::snprintf(head, sizeof head, "criterion %02d ", r.id);
  return head + r.name + ": " + (r.pass ? "PASS" : "FAIL") + " (measured " +
         num(r.measured) + ", tolerance " + num(r.tolerance) + ") " + r.detail;
}

DiracFamily<double> family_from_config(const RunConfig& cfg) {
  DiracFamily<double> fam;
  fam.mass = cfg.mass;
  fam.profile = cfg.profile.shape == "exponential"
                    ? RadialProfile<double>::exponential(cfg.profile.width)
                    : RadialProfile<double>::gaussian(cfg.profile.width);
  if (cfg.profile.p_max > 0) fam.profile.p_max = cfg.profile.p_max;
  fam.validate();
  return fam;
}

QuadratureSpec quadrature_from_config(const RunConfig& cfg) {
  QuadratureSpec q;
  q.n_radial = cfg.quadrature.radial;
  q.n_polar = cfg.quadrature.polar;
  q.n_azimuthal = cfg.quadrature.azimuthal;
  q.validate();
  return q;
}

ParameterContour<double> contour_from_config(const RunConfig& cfg) {
  const auto& c = cfg.contour;
  if (c.shape == "circle") {
    auto out = ParameterContour<double>::circle(
        c.theta, static_cast<std::size_t>(c.points), c.radius, c.phi0);
    out.orientation = c.orientation;
    return out;
  }
  ParameterContour<double> out;
  out.orientation = c.orientation;
  if (c.shape == "octant") {
    auto oct = ParameterContour<double>::octant();
    oct.orientation = c.orientation;
    return oct;
  }
  if (c.shape == "polygon") {
    for (const auto& v : c.vertices)
      out.points.emplace_back(v[0], v[1], v[2]);
    return out;
  }
  std::ifstream in(c.path);
  if (!in) throw ConfigError("cannot open contour file: " + c.path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("contour file parse failure: " + std::string(e.what()));
  }
  if (!j.is_array()) throw ConfigError("contour file must hold [x,y,z] rows");
  for (const auto& row : j) {
    std::array<double, 3> v{};
    try {
      row.get_to(v);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("contour file must hold [x,y,z] rows");
    }
    out.points.emplace_back(v[0], v[1], v[2]);
  }
  return out;
}

}  // namespace spinberry
