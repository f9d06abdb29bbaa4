#ifndef SPINBERRY_CONFIG_HPP
#define SPINBERRY_CONFIG_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include <spinberry/errors.hpp>

// Run configuration: one structured file plus dotted-key overrides.  Every
// knob is validated against the module preconditions before any computation
// starts, and the canonical serialization hashes into the reproducibility
// tag carried by every emitted record.

namespace spinberry {

struct ProfileConfig {
  std::string shape = "gaussian";  // gaussian | exponential
  double width = 1.0;
  double p_max = 0.0;  // 0: cutoff chosen from the shape and width
};

struct QuadratureConfig {
  int radial = 64;
  int polar = 32;
  int azimuthal = 32;
};

struct ContourConfig {
  std::string shape = "circle";  // circle | polygon | octant | file
  double theta = 1.0471975511965976;  // circle opening angle, radians
  std::uint64_t points = 2048;
  double radius = 1.0;
  double phi0 = 0.0;
  int orientation = 1;                          // 1 | -1, traversal sense
  std::vector<std::array<double, 3>> vertices;  // polygon shape
  std::string path;                             // file shape: JSON triples
};

struct PhaseConfig {
  std::uint64_t fd_line_points = 640;
  std::uint64_t mesh_azimuth = 1024;
  std::uint64_t mesh_rings = 0;  // 0: chosen from the cap opening angle
  std::uint64_t fd_mesh_azimuth = 1024;
};

struct AdiabaticConfig {
  double delta = 1.0;
  double duration = 500.0;
  double theta = 1.0471975511965976;
  std::uint64_t steps = 100000;
  std::vector<double> sweep_durations = {50.0, 100.0, 200.0, 500.0};
};

struct AcceptanceConfig {
  std::uint64_t expectation_samples = 10;
  std::uint64_t overlap_pairs = 20;
  std::uint64_t connection_samples = 100;
  std::uint64_t direction_samples = 100;
  std::uint64_t curvature_samples = 20;
  std::uint64_t sphere_polar = 32;
  std::uint64_t sphere_azimuthal = 32;
  std::uint64_t stokes_line_points = 1024;
  std::uint64_t stokes_fd_line_points = 640;
  std::uint64_t stokes_mesh_rings = 0;  // 0: chosen per cap
  std::uint64_t discrete_points = 2000;
  std::uint64_t solid_points = 40000;
  std::uint64_t rabi_steps = 10000;
};

struct RunConfig {
  double mass = 1.0;
  ProfileConfig profile;
  QuadratureConfig quadrature;
  std::array<double, 3> spin = {0.0, 0.0, 1.0};
  ContourConfig contour;
  double fd_step = 0.0;         // 0: step chosen from the point radius
  double plaquette_step = 0.0;  // 0: step chosen from the point radius
  PhaseConfig phase;
  AdiabaticConfig adiabatic;
  AcceptanceConfig acceptance;
  std::uint64_t seed = 20200622;
  bool timestamp = false;
  std::string format = "json";  // json | csv
  std::string output;           // empty: stdout

  void validate() const;  // throws ConfigError with the offending key
  nlohmann::json to_json() const;
  std::string canonical() const;  // sorted keys, shortest-roundtrip numbers
  std::uint64_t hash() const;     // FNV-1a over the canonical form

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
};

// Applies one "dotted.key=value" override; the value parses as JSON first
// and falls back to a plain string.
void apply_override(nlohmann::json& tree, const std::string& assignment);

}  // namespace spinberry

#endif
