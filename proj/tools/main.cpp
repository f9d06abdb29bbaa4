#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>
#include <spinberry/adiabatic.hpp>
#include <spinberry/berry.hpp>
#include <spinberry/clifford.hpp>
#include <spinberry/dirac.hpp>
#include <spinberry/errors.hpp>
#include <spinberry/spin_param.hpp>

#include "config.hpp"
#include "emit.hpp"
#include "verify.hpp"

// Thin orchestration layer: every emitted number comes from a library call;
// the code here only routes configuration in and formats records out.

namespace {

using namespace spinberry;

Vec3d spin_of(const RunConfig& cfg) {
  return Vec3d(cfg.spin[0], cfg.spin[1], cfg.spin[2]);
}

void add_vec(Report& rep, const std::string& name, const Vec3d& v,
             const std::string& detail = "") {
  rep.add(name + "_x", v[0], detail);
  rep.add(name + "_y", v[1]);
  rep.add(name + "_z", v[2]);
}

Report make_report(const RunConfig& cfg, const std::string& command) {
  Report rep;
  rep.command = command;
  rep.config_hash = cfg.hash();
  rep.with_timestamp = cfg.timestamp;
  return rep;
}

int cmd_spin_expectation(const RunConfig& cfg, bool quiet) {
  const DiracFamily<double> fam = family_from_config(cfg);
  const QuadratureSpec quad = quadrature_from_config(cfg);
  const Vec3d s = spin_of(cfg);
  const SpinExpectation<double> result = spin_expectation_report(fam, s, quad);
  const Vec2cd w = fam.spinor_map(s);
  Vec3d closed;
  const double den = w.squaredNorm();
  for (int k = 0; k < 3; ++k)
    closed[k] = (w.adjoint() * pauli(k) * w)(0).real() / den;
  const double rel = (result.covariant - closed).norm() / closed.norm();
  const bool pass = rel < 1e-8;
  Report rep = make_report(cfg, "spin-expectation");
  add_vec(rep, "spin_input", s);
  add_vec(rep, "covariant", result.covariant,
          "quadrature ratio under the Lorentz-scalar weight");
  add_vec(rep, "density", result.density,
          "quadrature ratio under the probability-density weight");
  add_vec(rep, "closed_form", closed, "spinor ratio oracle");
  rep.add("covariant_weight", result.covariant_weight);
  rep.add("density_weight", result.density_weight);
  rep.add("relative_error", rel);
  rep.add("pass", pass, "covariant ratio vs closed form at 1e-8");
  write_report(rep, cfg.format, cfg.output);
  if (!quiet)
    std::cout << "spin expectation relative error " << rel << " -> "
              << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 2;
}

int cmd_connection(const RunConfig& cfg, bool quiet) {
  const QuadratureSpec quad = quadrature_from_config(cfg);
  const FamilyOverlap<double> ov(family_from_config(cfg), quad);
  const Vec3d s = spin_of(cfg);
  const ConnectionSample<double> fd = connection_fd(ov, s, cfg.fd_step);
  const ConnectionSample<double> sp = connection_spinor(s);
  const ConnectionSample<double> mo = monopole_connection(s);
  Report rep = make_report(cfg, "connection");
  add_vec(rep, "spin_input", s);
  add_vec(rep, "fd", fd.value, "overlap derivative, step-halving combined");
  add_vec(rep, "fd_central", fd.central, "plain central difference");
  rep.add("fd_step", fd.h);
  rep.add("fd_truncation", fd.truncation);
  rep.add("fd_reality_defect", fd.imag_residue);
  add_vec(rep, "spinor_closed_form", sp.value, "half-strength closed form");
  add_vec(rep, "monopole_closed_form", mo.value, "full-strength closed form");
  rep.add("difference_fd_spinor", (fd.value - sp.value).norm());
  rep.add("difference_fd_monopole", (fd.value - mo.value).norm());
  write_report(rep, cfg.format, cfg.output);
  if (!quiet)
    std::cout << "connection fd vs half-strength closed form differs by "
              << (fd.value - sp.value).norm() << "\n";
  return 0;
}

int cmd_curvature(const RunConfig& cfg, bool quiet) {
  const QuadratureSpec quad = quadrature_from_config(cfg);
  const FamilyOverlap<double> ov(family_from_config(cfg), quad);
  const Vec3d s = spin_of(cfg);
  const Vec3d fd = curvature_fd(ov, s, cfg.plaquette_step);
  const Vec3d sp = spinor_curvature(s);
  const Vec3d mo = monopole_curvature(s);
  const double sin_angle = fd.cross(-s).norm() / (fd.norm() * s.norm());
  Report rep = make_report(cfg, "curvature");
  add_vec(rep, "spin_input", s);
  add_vec(rep, "fd", fd, "plaquette loop phases, step-halving combined");
  add_vec(rep, "spinor_closed_form", sp, "half-strength radial field");
  add_vec(rep, "monopole_closed_form", mo, "full-strength radial field");
  rep.add("difference_fd_spinor", (fd - sp).norm());
  rep.add("sin_angle_to_inward_radial", sin_angle);
  write_report(rep, cfg.format, cfg.output);
  if (!quiet)
    std::cout << "curvature fd vs half-strength closed form differs by "
              << (fd - sp).norm() << "\n";
  return 0;
}

int cmd_phase(const RunConfig& cfg, bool quiet) {
  const ParameterContour<double> contour = contour_from_config(cfg);
  bool pole_clear = true;
  try {
    contour.validate(true);
  } catch (const PoleSingularity&) {
    pole_clear = false;
  }
  Report rep = make_report(cfg, "phase");
  if (!pole_clear) {
    contour.validate(false);
    rep.add("solid_angle", solid_angle(contour), "steradians");
    rep.add("note",
            "contour touches the connection axis; phase routes are "
            "undefined there, so only the solid angle is reported");
    write_report(rep, cfg.format, cfg.output);
    if (!quiet)
      std::cout << "contour touches the connection axis; solid angle only\n";
    return 0;
  }
  const QuadratureSpec quad = quadrature_from_config(cfg);
  const FamilyOverlap<double> ov(family_from_config(cfg), quad);
  PhaseOptions opt;
  opt.fd_line_points = cfg.phase.fd_line_points;
  opt.mesh_azimuth = cfg.phase.mesh_azimuth;
  opt.mesh_rings = cfg.phase.mesh_rings;
  opt.fd_mesh_azimuth = cfg.phase.fd_mesh_azimuth;
  opt.fd_step = cfg.fd_step;
  const PhaseReport<double> pr = compute_phase_report(ov, contour, opt);
  rep.add("line_fd", pr.line_fd, "trapezoid of the overlap-derivative field");
  rep.add("line_spinor", pr.line_spinor, "half-strength closed form");
  rep.add("line_monopole", pr.line_monopole, "full-strength closed form");
  rep.add("discrete", pr.discrete, "overlap-product phase, principal value");
  rep.add("stokes_fd", pr.stokes_fd, "summed triangle loop phases");
  rep.add("stokes_spinor", pr.stokes_spinor, "half-strength curvature flux");
  rep.add("stokes_monopole", pr.stokes_monopole,
          "full-strength curvature flux");
  rep.add("solid_angle", pr.solid, "steradians");
  rep.add("ratio_discrete_over_solid", pr.ratio_discrete_over_solid);
  rep.add("ratio_discrete_over_half_solid", pr.ratio_discrete_over_half_solid);
  rep.add("residual_line_fd_spinor", pr.residual_line_fd_spinor);
  rep.add("residual_discrete_half_solid", pr.residual_discrete_half_solid);
  rep.add("residual_stokes_fd", pr.residual_stokes_fd,
          "nearest multiple of pi removed");
  rep.add("residual_stokes_spinor", pr.residual_stokes_spinor,
          "nearest multiple of pi removed");
  rep.add("residual_stokes_monopole", pr.residual_stokes_monopole,
          "nearest multiple of pi removed");
  rep.add("offset_stokes_fd", pr.offset_stokes_fd,
          "axis string flux, multiples of pi");
  rep.add("offset_stokes_spinor", pr.offset_stokes_spinor,
          "axis string flux, multiples of pi");
  rep.add("offset_stokes_monopole", pr.offset_stokes_monopole,
          "axis string flux, multiples of pi");
  write_report(rep, cfg.format, cfg.output);
  if (!quiet)
    std::cout << "discrete phase " << pr.discrete << ", solid angle "
              << pr.solid << "\n";
  return 0;
}

int cmd_adiabatic(const RunConfig& cfg, bool quiet) {
  const auto& ad = cfg.adiabatic;
  const SweepResult<double> sweep = geometric_phase_sweep(
      ad.theta, ad.delta, ad.sweep_durations, ad.steps);
  const double target = -kPi * (1.0 - std::cos(ad.theta));
  Report rep = make_report(cfg, "adiabatic");
  bool warned = false;
  for (std::size_t i = 0; i < sweep.times.size(); ++i) {
    const std::string tag = "run" + std::to_string(i) + "_";
    const EvolutionResult<double>& run = sweep.runs[i];
    rep.add(tag + "duration", sweep.times[i]);
    rep.add(tag + "geometric", run.geometric);
    rep.add(tag + "target", target, "minus half the swept solid angle");
    rep.add(tag + "error", sweep.errors[i]);
    rep.add(tag + "fidelity", run.fidelity);
    const double step_phase =
        ad.delta * sweep.times[i] / (2.0 * static_cast<double>(ad.steps));
    if (!run.reliable || step_phase > 0.05) {
      warned = true;
      rep.add(tag + "warning",
              "integrator resolution: step count too low for this duration");
    }
  }
  rep.add("error_exponent", sweep.exponent,
          "least-squares slope of log error vs log duration");
  if (!quiet)
    std::cout << "geometric phase error exponent " << sweep.exponent
              << (warned ? " (integrator resolution warning)" : "") << "\n";
  write_report(rep, cfg.format, cfg.output);
  return 0;
}

int cmd_verify_all(const RunConfig& cfg, bool quiet) {
  const std::vector<CriterionResult> results = run_acceptance(cfg);
  if (!quiet)
    for (const auto& r : results) std::cout << criterion_line(r) << "\n";
  Report rep = make_report(cfg, "verify-all");
  append_criteria(rep, results);
  rep.add("overall_pass", all_pass(results));
  write_report(rep, cfg.format, cfg.output);
  return all_pass(results) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-family geometric phase workbench"};
  app.require_subcommand(1);
  std::string config_path, output, format;
  std::uint64_t seed = 0;
  bool seed_set = false, quiet = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "configuration file (JSON)");
  app.add_option("--output", output, "output file path (default stdout)");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "seed for randomized suites")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_flag("--quiet", quiet, "suppress progress lines");
  app.add_option("--set", overrides,
                 "dotted configuration override, e.g. mass=2 or "
                 "contour.points=512");
  auto* sub_expect =
      app.add_subcommand("spin-expectation", "quadrature vs closed form");
  auto* sub_conn = app.add_subcommand("connection", "one-point connection");
  auto* sub_curv = app.add_subcommand("curvature", "one-point curvature");
  auto* sub_phase = app.add_subcommand("phase", "all phase routes");
  auto* sub_adia = app.add_subcommand("adiabatic", "two-level sweep");
  auto* sub_verify = app.add_subcommand("verify-all", "acceptance suite");
  CLI11_PARSE(app, argc, argv);
  try {
    nlohmann::json tree = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open configuration file: " +
                                 config_path);
      try {
        in >> tree;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("configuration parse failure: " +
                          std::string(e.what()));
      }
    }
    for (const std::string& assignment : overrides)
      apply_override(tree, assignment);
    RunConfig cfg = RunConfig::from_json(tree);
    if (seed_set) cfg.seed = seed;
    if (!format.empty()) cfg.format = format;
    if (!output.empty()) cfg.output = output;
    if (sub_expect->parsed()) return cmd_spin_expectation(cfg, quiet);
    if (sub_conn->parsed()) return cmd_connection(cfg, quiet);
    if (sub_curv->parsed()) return cmd_curvature(cfg, quiet);
    if (sub_phase->parsed()) return cmd_phase(cfg, quiet);
    if (sub_adia->parsed()) return cmd_adiabatic(cfg, quiet);
    if (sub_verify->parsed()) return cmd_verify_all(cfg, quiet);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
