#include "lsg/error.hpp"
#include "lsg/runner.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace lsg;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvariantViolation;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

double result(const ResultRecord& r, const std::string& name) {
  for (const auto& [k, v] : r.results) {
    if (k == name) return v;
  }
  FAIL("missing result " << name);
  return 0.0;
}

std::string note(const ResultRecord& r, const std::string& name) {
  for (const auto& [k, v] : r.notes) {
    if (k == name) return v;
  }
  return {};
}

}  // namespace

TEST_CASE("parse_config defaults and examples") {
  const auto d = parse_config("");
  CHECK(d.group == "A1");
  CHECK(d.grid.n == 512);
  CHECK(d.grid.half_width == 12.0);
  CHECK(d.seed == 42);
  CHECK(d.tolerances.at("crit") == 0.02);

  const auto c = parse_config("group = A2\nt = 1.0");
  CHECK(c.group == "A2");
  REQUIRE(c.times.size() == 1);
  CHECK(c.times[0] == 1.0);

  const auto full = parse_config(
      "# comment\n group=G2 \ngrid = 64, 6 # trailing\nspectral_grid = 32,4\ntimes = 0.5,1,2\ninit = gaussian:a=2,chirp=0.1\n"
      "seed = 18446744073709551615\ntol.crit = 0.05\nformat = jsonl\nlambda = 1,2\n");
  CHECK(full.grid.n == 64);
  CHECK(full.spectral_grid->half_width == 4.0);
  CHECK(full.times.size() == 3);
  CHECK(full.seed == 18446744073709551615ULL);
  CHECK(full.tolerances.at("crit") == 0.05);
  CHECK(full.params.at("lambda") == "1,2");
}

TEST_CASE("parse_config errors") {
  CHECK(code_of([] { parse_config("grid = 15,10"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("grid = 8,10"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("grid = 16,0"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("t = -1"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("seed = -3"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("no equals sign"); }) == ErrorCode::ConfigError);
  try {
    parse_config("colour = blue");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
}

TEST_CASE("format_number round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("rootsys record") {
  RunConfig c;
  c.group = "A1";
  const auto r = run("rootsys", c);
  CHECK(result(r, "rank") == 1.0);
  CHECK(result(r, "weyl_order") == 2.0);
  const std::string line = r.to_json_line();
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("\"weyl_order\":2") != std::string::npos);
}

TEST_CASE("hardy-check with the critical preset file") {
  const auto c = parse_config(slurp(LSG_SOURCE_DIR "/configs/critical-chirp.cfg"));
  const auto r = run("hardy-check", c);
  CHECK(note(r, "classification") == "CRITICAL");
  CHECK(result(r, "product") == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.tolerances.at("product") == 0.02);
}

TEST_CASE("module errors carry the command name") {
  RunConfig c;
  c.group = "F4";
  try {
    run("rootsys", c);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedRootSystem);
    CHECK(std::string(e.what()).find("rootsys: ") != std::string::npos);
  }
  CHECK(code_of([] { run("bogus", RunConfig{}); }) == ErrorCode::ConfigError);
}

TEST_CASE("identical config gives byte-identical artifacts") {
  auto c = parse_config("group = A2\ngrid = 64,8\ntimes = 1,2\ninit = gaussian:a=1,chirp=0.2\noutput = runner_test_a.csv\n");
  const auto r1 = run("evolve", c);
  const std::string first = slurp("runner_test_a.csv");
  const auto r2 = run("evolve", c);
  CHECK(slurp("runner_test_a.csv") == first);
  CHECK(r1.to_json_line() == r2.to_json_line());
  CHECK(first.rfind("t,h1,h2,re_uphi,im_uphi,abs_u\n", 0) == 0);

  c.format = "jsonl";
  c.output = "runner_test_b.jsonl";
  c.times = {1.0};
  c.times_given = false;
  run("decay-fit", c);
  const std::string j1 = slurp("runner_test_b.jsonl");
  run("decay-fit", c);
  CHECK(slurp("runner_test_b.jsonl") == j1);
  std::remove("runner_test_a.csv");
  std::remove("runner_test_b.jsonl");
}

TEST_CASE("every command dispatches") {
  auto c = parse_config("group = A1\ngrid = 256,10\n");
  c.action = "eval";
  c.params["lambda"] = "0.7";
  CHECK(result(run("spherical", c), "value_at_origin") == doctest::Approx(1.0).epsilon(1e-10));
  c.action = "roundtrip";
  CHECK(result(run("spherical", c), "roundtrip_error") < 1e-6);
  c.action = "";
  CHECK(result(run("evolve", c), "mass_drift_t1") < 1e-8);
  CHECK(note(run("hardy-check", c), "classification") == "INCONCLUSIVE");
  CHECK(std::abs(result(run("decay-fit", c), "slope") + 0.5) < 0.05);
  c.grid = {512, 16};
  CHECK(result(run("strichartz", c), "stabilization") < 0.02);
  c.action = "geodesic";
  CHECK(result(run("heisenberg", c), "projection_residual") < 1e-12);
  c.action = "heat";
  CHECK(result(run("heisenberg", c), "error_estimate") < 1e-9);
  c.action = "integrand";
  CHECK(note(run("heisenberg", c), "singularities").find("3.14159") == 0);
}
