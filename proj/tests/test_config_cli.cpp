#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "config.hpp"

#ifndef SPINBERRY_CLI_PATH
#error "SPINBERRY_CLI_PATH must point at the command line binary"
#endif

using namespace spinberry;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPINBERRY_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json load_report(const std::string& path) { return json::parse(slurp(path)); }

json record_value(const json& report, const std::string& name) {
  for (const auto& r : report.at("records")) {
    if (r.at("name") == name) return r.at("value");
  }
  FAIL("record not found: ", name);
  return {};
}

}  // namespace

TEST_CASE("default configuration is valid and roundtrips") {
  RunConfig cfg;
  cfg.validate();
  const RunConfig back = RunConfig::from_json(cfg.to_json());
  CHECK(back.canonical() == cfg.canonical());
  CHECK(back.hash() == cfg.hash());

  RunConfig heavier = cfg;
  heavier.mass = 2.0;
  CHECK(heavier.hash() != cfg.hash());
  CHECK(RunConfig{}.hash() == cfg.hash());
}

TEST_CASE("unknown and ill-typed keys are rejected by name") {
  json tree = RunConfig{}.to_json();
  tree["profile"]["wdith"] = 1;
  CHECK_THROWS_WITH_AS(RunConfig::from_json(tree),
                       doctest::Contains("profile.wdith"), ConfigError);

  json bad = RunConfig{}.to_json();
  bad["mass"] = "heavy";
  CHECK_THROWS_WITH_AS(RunConfig::from_json(bad),
                       doctest::Contains("bad value"), ConfigError);

  json versioned = RunConfig{}.to_json();
  versioned["format_version"] = 2;
  CHECK_THROWS_AS(RunConfig::from_json(versioned), ConfigError);
}

TEST_CASE("validation names the offending field") {
  RunConfig zero_spin;
  zero_spin.spin = {0.0, 0.0, 0.0};
  CHECK_THROWS_WITH_AS(zero_spin.validate(),
                       doctest::Contains("zero spin vector"), ConfigError);

  RunConfig bad_orient;
  bad_orient.contour.orientation = 2;
  CHECK_THROWS_WITH_AS(bad_orient.validate(),
                       doctest::Contains("orientation"), ConfigError);
}

TEST_CASE("dotted overrides parse JSON values with string fallback") {
  json tree = RunConfig{}.to_json();
  apply_override(tree, "mass=2.5");
  apply_override(tree, "contour.shape=octant");
  apply_override(tree, "adiabatic.sweep_durations=[10,20]");
  const RunConfig cfg = RunConfig::from_json(tree);
  CHECK(cfg.mass == 2.5);
  CHECK(cfg.contour.shape == "octant");
  REQUIRE(cfg.adiabatic.sweep_durations.size() == 2);
  CHECK(cfg.adiabatic.sweep_durations[0] == 10.0);
  CHECK(cfg.adiabatic.sweep_durations[1] == 20.0);

  CHECK_THROWS_AS(apply_override(tree, "mass"), ConfigError);
  json bogus = RunConfig{}.to_json();
  apply_override(bogus, "bogus.key=1");
  CHECK_THROWS_AS(RunConfig::from_json(bogus), ConfigError);
}

TEST_CASE("configuration files must hold a JSON object") {
  {
    std::ofstream out("cfg_garbage.json", std::ios::binary);
    out << "not json at all\n";
  }
  CHECK_THROWS_AS(RunConfig::from_file("cfg_garbage.json"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_file("cfg_missing_file.json"), ConfigError);
}

TEST_CASE("spin expectation command reports a passing reduction") {
  REQUIRE(run_cli("--output t1.json spin-expectation > /dev/null") == 0);
  const json rep = load_report("t1.json");
  CHECK(rep.at("format_version") == 1);
  CHECK(rep.at("command") == "spin-expectation");
  CHECK(record_value(rep, "pass") == true);
  const double rel = record_value(rep, "relative_error").get<double>();
  CHECK(rel < 1e-8);
}

TEST_CASE("invalid configuration surfaces on stderr with exit one") {
  CHECK(run_cli("--set 'spin=[0,0,0]' spin-expectation >/dev/null 2>t2.err") ==
        1);
  CHECK(slurp("t2.err").find("zero spin vector") != std::string::npos);
}

TEST_CASE("phase command degrades gracefully on a pole-touching contour") {
  REQUIRE(run_cli("--set contour.shape=octant --output t3.json phase "
                  "> /dev/null") == 0);
  const json rep = load_report("t3.json");
  const double solid = record_value(rep, "solid_angle").get<double>();
  CHECK(std::abs(solid - 1.5707963267948966) < 1e-10);
  CHECK(record_value(rep, "note").is_string());
}

TEST_CASE("acceptance run distinguishes passing and failing criteria") {
  RunConfig mini;
  mini.quadrature = {16, 8, 8};
  mini.acceptance.expectation_samples = 3;
  mini.acceptance.overlap_pairs = 3;
  mini.acceptance.connection_samples = 3;
  mini.acceptance.direction_samples = 5;
  mini.acceptance.curvature_samples = 2;
  mini.acceptance.sphere_polar = 12;
  mini.acceptance.sphere_azimuthal = 12;
  mini.acceptance.stokes_line_points = 256;
  mini.acceptance.stokes_fd_line_points = 24;
  mini.acceptance.stokes_mesh_rings = 32;
  mini.acceptance.discrete_points = 64;  // deficit ~1e-3: criterion must fail
  mini.acceptance.solid_points = 2000;
  mini.acceptance.rabi_steps = 4000;
  mini.adiabatic.steps = 4000;
  mini.adiabatic.sweep_durations = {10.0, 20.0, 40.0};
  mini.validate();
  {
    std::ofstream out("cli_mini.json", std::ios::binary);
    out << mini.to_json().dump(2) << "\n";
  }
  CHECK(run_cli("--config cli_mini.json --quiet --output t4.json verify-all "
                "> /dev/null") == 2);
  const json rep = load_report("t4.json");
  CHECK(record_value(rep, "c08_discrete_phase_pass") == false);
  CHECK(record_value(rep, "c01_expectation_reduction_pass") == true);
  CHECK(record_value(rep, "overall_pass") == false);
}

TEST_CASE("csv rendering starts with the fixed header") {
  REQUIRE(run_cli("--format csv --output t5.csv spin-expectation "
                  "> /dev/null") == 0);
  const std::string text = slurp("t5.csv");
  CHECK(text.rfind("name,value,detail\n", 0) == 0);
  CHECK(text.find("_format_version,1") != std::string::npos);
}

TEST_CASE("connection at the default axis point reports the pole") {
  CHECK(run_cli("connection >/dev/null 2>t6.err") == 1);
  CHECK(slurp("t6.err").find("pole") != std::string::npos);
}

TEST_CASE("repeated runs emit byte-identical reports") {
  REQUIRE(run_cli("--output t7a.json spin-expectation > /dev/null") == 0);
  REQUIRE(run_cli("--output t7b.json spin-expectation > /dev/null") == 0);
  CHECK(slurp("t7a.json") == slurp("t7b.json"));
}
