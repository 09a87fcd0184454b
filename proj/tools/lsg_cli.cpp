#include "lsg/error.hpp"
#include "lsg/runner.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

void bind_key(CLI::App* app, Overrides& out, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&out, key](const std::string& v) { out.emplace_back(key, v); }, help);
}

void common_options(CLI::App* app, Overrides& out) {
  bind_key(app, out, "--group", "group", "root system (A1, A2, B2, G2, A1xA1, ...)");
  app->add_option_function<std::string>(
      "--euclid", [&out](const std::string& n) { out.emplace_back("group", "euclid:" + n); },
      "Euclidean dimension instead of a group");
  bind_key(app, out, "--grid", "grid", "N,L");
  bind_key(app, out, "--spectral-grid", "spectral_grid", "N_s,L_s");
  bind_key(app, out, "--t,--times", "times", "comma-separated positive times");
  bind_key(app, out, "--init", "init", "gaussian:a=<a>[,chirp=<c>][,amp=<A>]");
  bind_key(app, out, "--seed", "seed", "64-bit seed");
  bind_key(app, out, "--out", "output", "artifact path");
  bind_key(app, out, "--format", "format", "csv or jsonl");
  app->add_option_function<std::vector<std::string>>(
      "--set",
      [&out](const std::vector<std::string>& items) {
        for (const auto& item : items) {
          const auto eq = item.find('=');
          if (eq == std::string::npos) lsg::fail(lsg::ErrorCode::ConfigError, "--set expects key=value, got " + item);
          out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        }
      },
      "extra key=value settings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lsg_cli: bi-invariant Schrodinger propagation and Gaussian experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value configuration file");
  Overrides overrides;

  auto* rootsys = app.add_subcommand("rootsys", "root system data");
  std::string rootsys_action = "info";
  std::string rootsys_name;
  rootsys->add_option("action", rootsys_action, "info")->check(CLI::IsMember({"info"}));
  rootsys->add_option("name", rootsys_name, "root system name");

  auto* spherical = app.add_subcommand("spherical", "spherical functions and transforms");
  bind_key(spherical, overrides, "action", "action", "eval, transform or roundtrip");
  bind_key(spherical, overrides, "--lambda", "lambda", "spectral parameter, comma-separated");

  auto* evolve = app.add_subcommand("evolve", "propagate Gaussian data");
  bind_key(evolve, overrides, "--method", "method", "closed or spectral");
  bind_key(evolve, overrides, "--mode", "mode", "scaled or fixed");

  auto* hardy = app.add_subcommand("hardy-check", "Gaussian-envelope uniqueness experiment");
  bind_key(hardy, overrides, "--t0", "t0", "observation time");
  bind_key(hardy, overrides, "--tol-crit", "tol.crit", "critical band half-width");

  auto* decay = app.add_subcommand("decay-fit", "dispersive decay exponent");
  bind_key(decay, overrides, "--p", "p", "exponent in [1, 2]");

  auto* strichartz = app.add_subcommand("strichartz", "space-time norm convergence");
  bind_key(strichartz, overrides, "--T", "T", "final time");
  bind_key(strichartz, overrides, "--refinements", "refinements", "quadrature refinement levels");
  bind_key(strichartz, overrides, "--q", "q", "space-time exponent (default admissible)");

  auto* heis = app.add_subcommand("heisenberg", "Heisenberg group explorer");
  bind_key(heis, overrides, "action", "action", "geodesic, integrand or heat");
  for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--beta", "beta"}, {"--tparam", "tparam"}, {"--smax", "smax"}, {"--steps", "steps"}, {"--x", "x"},
           {"--u", "u"}, {"--xi", "xi"}, {"--lmax", "lmax"}, {"--tol", "quad_tol"}}) {
    bind_key(heis, overrides, flag, key, key);
  }

  auto* reproduce = app.add_subcommand("reproduce", "run every acceptance criterion");

  for (auto* sub : {spherical, evolve, hardy, decay, strichartz, heis, reproduce}) common_options(sub, overrides);
  for (auto* sub : {rootsys}) bind_key(sub, overrides, "--out", "output", "artifact path");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      std::cerr << "error ConfigError: " << one_line(e.what()) << '\n';
      return lsg::exit_status(lsg::ErrorCode::ConfigError);
    }

    lsg::RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) lsg::fail(lsg::ErrorCode::ConfigError, "config: cannot read " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      config = lsg::parse_config(text.str());
    }
    if (!rootsys_name.empty()) lsg::apply_setting(config, "group", rootsys_name);
    for (const auto& [key, value] : overrides) lsg::apply_setting(config, key, value);

    const std::string command = app.get_subcommands().front()->get_name();
    const auto record = lsg::run(command, config);
    std::cout << record.to_json_line() << '\n';
    std::cerr << "duration_seconds=" << lsg::format_number(record.duration_seconds) << '\n';
    return record.exit_status;
  } catch (const lsg::Error& e) {
    std::cerr << "error " << one_line(e.what()) << '\n';
    return lsg::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error Internal: " << one_line(e.what()) << '\n';
    return 3;
  }
}
