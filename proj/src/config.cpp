#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <spinberry/errors.hpp>
#include <spinberry/types.hpp>

namespace spinberry {

namespace {

void require_known_keys(const nlohmann::json& input,
                        const nlohmann::json& schema,
                        const std::string& prefix) {
  for (const auto& [key, value] : input.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!schema.contains(key))
      throw ConfigError("unknown configuration key: " + path);
    if (value.is_object() && schema.at(key).is_object())
      require_known_keys(value, schema.at(key), path);
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for configuration key: ") + key);
  }
}

void check(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["mass"] = mass;
  j["profile"] = {{"shape", profile.shape},
                  {"width", profile.width},
                  {"p_max", profile.p_max}};
  j["quadrature"] = {{"radial", quadrature.radial},
                     {"polar", quadrature.polar},
                     {"azimuthal", quadrature.azimuthal}};
  j["spin"] = spin;
  j["contour"] = {{"shape", contour.shape},
                  {"theta", contour.theta},
                  {"points", contour.points},
                  {"radius", contour.radius},
                  {"phi0", contour.phi0},
                  {"orientation", contour.orientation},
                  {"vertices", contour.vertices},
                  {"path", contour.path}};
  j["fd_step"] = fd_step;
  j["plaquette_step"] = plaquette_step;
  j["phase"] = {{"fd_line_points", phase.fd_line_points},
                {"mesh_azimuth", phase.mesh_azimuth},
                {"mesh_rings", phase.mesh_rings},
                {"fd_mesh_azimuth", phase.fd_mesh_azimuth}};
  j["adiabatic"] = {{"delta", adiabatic.delta},
                    {"duration", adiabatic.duration},
                    {"theta", adiabatic.theta},
                    {"steps", adiabatic.steps},
                    {"sweep_durations", adiabatic.sweep_durations}};
  j["acceptance"] = {
      {"expectation_samples", acceptance.expectation_samples},
      {"overlap_pairs", acceptance.overlap_pairs},
      {"connection_samples", acceptance.connection_samples},
      {"direction_samples", acceptance.direction_samples},
      {"curvature_samples", acceptance.curvature_samples},
      {"sphere_polar", acceptance.sphere_polar},
      {"sphere_azimuthal", acceptance.sphere_azimuthal},
      {"stokes_line_points", acceptance.stokes_line_points},
      {"stokes_fd_line_points", acceptance.stokes_fd_line_points},
      {"stokes_mesh_rings", acceptance.stokes_mesh_rings},
      {"discrete_points", acceptance.discrete_points},
      {"solid_points", acceptance.solid_points},
      {"rabi_steps", acceptance.rabi_steps}};
  j["seed"] = seed;
  j["timestamp"] = timestamp;
  j["format"] = format;
  j["output"] = output;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  require_known_keys(j, cfg.to_json(), "");
  if (j.contains("format_version")) {
    int version = 0;
    read(j, "format_version", version);
    check(version == 1, "unsupported configuration format_version");
  }
  read(j, "mass", cfg.mass);
  if (j.contains("profile")) {
    const auto& p = j.at("profile");
    read(p, "shape", cfg.profile.shape);
    read(p, "width", cfg.profile.width);
    read(p, "p_max", cfg.profile.p_max);
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    read(q, "radial", cfg.quadrature.radial);
    read(q, "polar", cfg.quadrature.polar);
    read(q, "azimuthal", cfg.quadrature.azimuthal);
  }
  read(j, "spin", cfg.spin);
  if (j.contains("contour")) {
    const auto& c = j.at("contour");
    read(c, "shape", cfg.contour.shape);
    read(c, "theta", cfg.contour.theta);
    read(c, "points", cfg.contour.points);
    read(c, "radius", cfg.contour.radius);
    read(c, "phi0", cfg.contour.phi0);
    read(c, "orientation", cfg.contour.orientation);
    read(c, "vertices", cfg.contour.vertices);
    read(c, "path", cfg.contour.path);
  }
  read(j, "fd_step", cfg.fd_step);
  read(j, "plaquette_step", cfg.plaquette_step);
  if (j.contains("phase")) {
    const auto& p = j.at("phase");
    read(p, "fd_line_points", cfg.phase.fd_line_points);
    read(p, "mesh_azimuth", cfg.phase.mesh_azimuth);
    read(p, "mesh_rings", cfg.phase.mesh_rings);
    read(p, "fd_mesh_azimuth", cfg.phase.fd_mesh_azimuth);
  }
  if (j.contains("adiabatic")) {
    const auto& a = j.at("adiabatic");
    read(a, "delta", cfg.adiabatic.delta);
    read(a, "duration", cfg.adiabatic.duration);
    read(a, "theta", cfg.adiabatic.theta);
    read(a, "steps", cfg.adiabatic.steps);
    read(a, "sweep_durations", cfg.adiabatic.sweep_durations);
  }
  if (j.contains("acceptance")) {
    const auto& a = j.at("acceptance");
    read(a, "expectation_samples", cfg.acceptance.expectation_samples);
    read(a, "overlap_pairs", cfg.acceptance.overlap_pairs);
    read(a, "connection_samples", cfg.acceptance.connection_samples);
    read(a, "direction_samples", cfg.acceptance.direction_samples);
    read(a, "curvature_samples", cfg.acceptance.curvature_samples);
    read(a, "sphere_polar", cfg.acceptance.sphere_polar);
    read(a, "sphere_azimuthal", cfg.acceptance.sphere_azimuthal);
    read(a, "stokes_line_points", cfg.acceptance.stokes_line_points);
    read(a, "stokes_fd_line_points", cfg.acceptance.stokes_fd_line_points);
    read(a, "stokes_mesh_rings", cfg.acceptance.stokes_mesh_rings);
    read(a, "discrete_points", cfg.acceptance.discrete_points);
    read(a, "solid_points", cfg.acceptance.solid_points);
    read(a, "rabi_steps", cfg.acceptance.rabi_steps);
  }
  read(j, "seed", cfg.seed);
  read(j, "timestamp", cfg.timestamp);
  read(j, "format", cfg.format);
  read(j, "output", cfg.output);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("configuration parse failure: " + std::string(e.what()));
  }
  return from_json(j);
}

void RunConfig::validate() const {
  check(std::isfinite(mass) && mass > 0.0, "mass must be positive and finite");
  check(profile.shape == "gaussian" || profile.shape == "exponential",
        "profile.shape must be gaussian or exponential");
  check(std::isfinite(profile.width) && profile.width > 0.0,
        "profile.width must be positive and finite");
  check(std::isfinite(profile.p_max) && profile.p_max >= 0.0,
        "profile.p_max must be nonnegative");
  check(quadrature.radial >= 2 && quadrature.polar >= 2 &&
            quadrature.azimuthal >= 2,
        "quadrature orders must each be at least 2");
  check(std::isfinite(spin[0]) && std::isfinite(spin[1]) &&
            std::isfinite(spin[2]),
        "spin components must be finite");
  check(spin[0] != 0.0 || spin[1] != 0.0 || spin[2] != 0.0,
        "zero spin vector");
  if (contour.shape == "circle") {
    check(contour.theta > 0.0 && contour.theta < kPi,
          "contour.theta must lie strictly between 0 and pi");
    check(contour.points >= 3, "contour.points must be at least 3");
    check(std::isfinite(contour.radius) && contour.radius > 0.0,
          "contour.radius must be positive and finite");
    check(std::isfinite(contour.phi0), "contour.phi0 must be finite");
  } else if (contour.shape == "polygon") {
    check(contour.vertices.size() >= 3,
          "contour.vertices needs at least 3 entries");
  } else if (contour.shape == "file") {
    check(!contour.path.empty(), "contour.path must name a file");
  } else {
    check(contour.shape == "octant",
          "contour.shape must be circle, polygon, octant, or file");
  }
  check(contour.orientation == 1 || contour.orientation == -1,
        "contour.orientation must be 1 or -1");
  check(std::isfinite(fd_step) && fd_step >= 0.0,
        "fd_step must be nonnegative");
  check(std::isfinite(plaquette_step) && plaquette_step >= 0.0,
        "plaquette_step must be nonnegative");
  check(phase.fd_line_points >= 3, "phase.fd_line_points must be at least 3");
  check(phase.mesh_azimuth >= 3, "phase.mesh_azimuth must be at least 3");
  check(phase.fd_mesh_azimuth >= 3,
        "phase.fd_mesh_azimuth must be at least 3");
  check(std::isfinite(adiabatic.delta) && adiabatic.delta > 0.0,
        "adiabatic.delta must be positive and finite");
  check(std::isfinite(adiabatic.duration) && adiabatic.duration > 0.0,
        "adiabatic.duration must be positive and finite");
  check(adiabatic.theta >= 0.0 && adiabatic.theta <= kPi,
        "adiabatic.theta must lie in [0, pi]");
  check(adiabatic.steps >= 1, "adiabatic.steps must be at least 1");
  check(adiabatic.sweep_durations.size() >= 2,
        "adiabatic.sweep_durations needs at least two entries");
  for (std::size_t i = 0; i < adiabatic.sweep_durations.size(); ++i) {
    check(std::isfinite(adiabatic.sweep_durations[i]) &&
              adiabatic.sweep_durations[i] > 0.0,
          "adiabatic.sweep_durations entries must be positive and finite");
    if (i > 0)
      check(adiabatic.sweep_durations[i] > adiabatic.sweep_durations[i - 1],
            "adiabatic.sweep_durations must increase");
  }
  check(acceptance.expectation_samples >= 1 && acceptance.overlap_pairs >= 1 &&
            acceptance.connection_samples >= 1 &&
            acceptance.direction_samples >= 1 &&
            acceptance.curvature_samples >= 1,
        "acceptance sample counts must be at least 1");
  check(acceptance.sphere_polar >= 2 && acceptance.sphere_azimuthal >= 3,
        "acceptance sphere grid needs at least 2 polar and 3 azimuthal cells");
  check(acceptance.stokes_line_points >= 3 &&
            acceptance.stokes_fd_line_points >= 3 &&
            acceptance.discrete_points >= 3 && acceptance.solid_points >= 3,
        "acceptance contour resolutions must be at least 3");
  check(acceptance.rabi_steps >= 1,
        "acceptance.rabi_steps must be at least 1");
  check(format == "json" || format == "csv", "format must be json or csv");
}

std::string RunConfig::canonical() const {
  // Delivery routing (where and in which container the report lands) stays
  // out of the reproducibility hash: reruns of one computation must stamp
  // one hash regardless of output path.
  nlohmann::json j = to_json();
  j.erase("output");
  j.erase("format");
  return j.dump();
}

std::uint64_t RunConfig::hash() const {
  const std::string text = canonical();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void apply_override(nlohmann::json& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like dotted.key=value: " +
                      assignment);
  const std::string dotted = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;  // unquoted strings pass through as-is
  }
  nlohmann::json* node = &tree;
  std::istringstream keys(dotted);
  std::string key, next;
  std::getline(keys, key, '.');
  while (std::getline(keys, next, '.')) {
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null())
      throw ConfigError("override path crosses a non-object key: " + dotted);
    key = next;
  }
  (*node)[key] = value;
}

}  // namespace spinberry
