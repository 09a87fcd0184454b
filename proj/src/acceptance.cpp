#include "lsg/acceptance.hpp"

#include "lsg/error.hpp"
#include "lsg/estimates.hpp"
#include "lsg/hardy.hpp"
#include "lsg/heisenberg.hpp"
#include "lsg/propagator.hpp"
#include "lsg/runner.hpp"
#include "lsg/spherical.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace lsg {
namespace {

struct Recorder {
  CriterionResult& r;
  void metric(const std::string& name, double value) { r.metrics.emplace_back(name, value); }
  void require(bool ok) { r.pass = r.pass && ok; }
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// ---- 1: Weyl group orders ------------------------------------------------

void weyl_orders(Recorder& rec) {
  const std::vector<std::pair<const char*, std::size_t>> expected{
      {"A1", 2}, {"A2", 6}, {"B2", 8}, {"G2", 12}, {"A1xA1", 4}};
  for (const auto& [name, order] : expected) {
    const auto rs = build_root_system(name);
    rec.metric(std::string("order_") + name, static_cast<double>(rs.weyl_group.size()));
    rec.require(rs.weyl_group.size() == order);
  }
}

// ---- 2: eigen-relation ---------------------------------------------------

// Largest residual of Delta_rad phi_lambda + (|lambda|^2 + |rho|^2) phi_lambda
// at nodes of `coarse` that are interior and at least `margin` from every wall.
double eigen_residual(const RootSystemSpec& rs, const RadialGrid& grid, const RadialGrid& coarse,
                      const Eigen::VectorXd& lambda, double margin) {
  BiInvariantField f{grid, std::vector<cplx>(grid.node_count()), Representation::Plain};
  std::vector<double> h(static_cast<std::size_t>(grid.rank()));
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, h);
    if (is_wall(rs, h) && !grid.node(i).isZero(0.0)) continue;
    f.values[i] = spherical_function(rs, SpectralVector{lambda}, CartanVector{grid.node(i)});
  }
  const BiInvariantField lap = radial_laplacian(rs, f);
  const double eigen = lambda.squaredNorm() + rs.rho.squaredNorm();
  double worst = 0.0;
  for (std::size_t i = 0; i < coarse.node_count(); ++i) {
    if (coarse.on_boundary(i)) continue;
    coarse.node(i, h);
    if (distance_to_walls(rs, h) < margin) continue;
    const auto j = grid.locate(h);
    if (j < 0) continue;
    const auto k = static_cast<std::size_t>(j);
    worst = std::max(worst, std::abs(lap.values[k] + eigen * f.values[k]));
  }
  return worst;
}

void eigen_relation(Recorder& rec, std::uint64_t seed) {
  struct Case {
    const char* name;
    int n;
    double l;
  };
  const Case cases[] = {{"A1", 2048, 12.0}, {"A2", 128, 10.0}};
  int index = 0;
  for (const auto& c : cases) {
    const auto rs = build_root_system(c.name);
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(index++));
    const RadialGrid coarse(rs.rank, c.l, c.n);
    const RadialGrid fine(rs.rank, c.l, 2 * c.n);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd lambda(rs.rank);
      do {
        for (int a = 0; a < rs.rank; ++a) lambda(a) = uniform(rng, -2.0, 2.0);
      } while (lambda.norm() < 0.5 ||
               distance_to_walls(rs, std::span<const double>(lambda.data(), static_cast<std::size_t>(rs.rank))) < 0.3);
      const double r1 = eigen_residual(rs, coarse, coarse, lambda, 0.5);
      const double r2 = eigen_residual(rs, fine, coarse, lambda, 0.5);
      const double ratio = r1 / r2;
      rec.metric(std::string(c.name) + "_ratio_" + std::to_string(trial), ratio);
      rec.require(std::abs(ratio - 4.0) <= 0.4);
    }
  }
}

// ---- 3: transform round trip ---------------------------------------------

// A1 uses the DFT-dual spectral lattice. On A2 the Weyl rotations carry the
// corners of that lattice beyond the space grid's Nyquist disc, so the spectral
// grid is inscribed in it and sized to the Gaussian's band instead.
void round_trip(Recorder& rec) {
  {
    const auto rs = build_root_system("A1");
    const RadialGrid grid(1, 12.0, 512);
    for (double a : {0.5, 1.0, 2.0}) {
      const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
      const auto back = inverse_spherical_transform(rs, spherical_transform(rs, f, grid.dual()), grid);
      const double err = relative_l2_density(rs, back, f);
      rec.metric("A1_a" + format_number(a), err);
      rec.require(err <= 1e-6);
    }
  }
  {
    const auto rs = build_root_system("A2");
    const RadialGrid grid(2, 12.0, 192);
    for (double a : {0.5, 1.0, 2.0}) {
      const double band = std::ceil(std::sqrt(144.0 * a));
      const RadialGrid spectral(2, band, 2 * static_cast<int>(std::ceil(band / 0.25)));
      const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
      const auto back = inverse_spherical_transform(rs, spherical_transform(rs, f, spectral), grid);
      const double err = relative_l2_density(rs, back, f);
      rec.metric("A2_a" + format_number(a), err);
      rec.require(err <= 1e-4);
    }
  }
}

// ---- 4: closed form against the spectral oracle ---------------------------

void propagator_equivalence(Recorder& rec) {
  {
    const auto rs = build_root_system("A1");
    const RadialGrid grid(1, 12.0, 2048);
    const auto f = sample_gaussian(grid, GaussianInit{});
    for (double t : {0.25, 1.0, 4.0}) {
      const auto a = group_propagate_closed_form(rs, f, t, GridMode::Fixed);
      const auto b = group_propagate_spectral(rs, f, t);
      const double err = relative_l2(a.field.values, b.field.values);
      rec.metric("A1_t" + format_number(t), err);
      rec.require(err <= 1e-6);
    }
    const RadialGrid ref(1, 8.0, 512);
    const auto g = sample_gaussian(ref, GaussianInit{});
    const auto k1 = calibrate_constant(rs, g, 0.5);
    const auto k2 = calibrate_constant(rs, g, 1.0);
    rec.metric("A1_fresnel_gap", std::abs(k1.calibrated - k1.analytic));
    rec.metric("A1_t_dependence", std::abs(k1.calibrated - k2.calibrated));
    rec.require(std::abs(k1.calibrated - k1.analytic) <= 1e-8);
    rec.require(std::abs(k1.calibrated - k2.calibrated) <= 1e-8);
  }
  {
    const auto rs = build_root_system("A2");
    const RadialGrid grid(2, 12.0, 128);
    const auto f = sample_gaussian(grid, GaussianInit{});
    const auto a = group_propagate_closed_form(rs, f, 1.0, GridMode::Fixed);
    const auto b = group_propagate_spectral(rs, f, 1.0);
    const double err = relative_l2(a.field.values, b.field.values);
    rec.metric("A2_t1", err);
    rec.require(err <= 1e-4);
    const RadialGrid ref(2, 8.0, 128);
    const auto g = sample_gaussian(ref, GaussianInit{});
    const auto k1 = calibrate_constant(rs, g, 0.25);
    const auto k2 = calibrate_constant(rs, g, 0.5);
    rec.metric("A2_fresnel_gap", std::abs(k1.calibrated - k1.analytic));
    rec.metric("A2_t_dependence", std::abs(k1.calibrated - k2.calibrated));
    rec.require(std::abs(k1.calibrated - k1.analytic) <= 1e-8);
    rec.require(std::abs(k1.calibrated - k2.calibrated) <= 1e-8);
  }
}

// ---- 5: mass conservation ------------------------------------------------

void mass_conservation(Recorder& rec) {
  double spectral_drift = 0.0;
  double closed_drift = 0.0;
  {
    const auto rs = build_root_system("A1");
    const RadialGrid grid(1, 12.0, 512);
    const auto f = sample_gaussian(grid, GaussianInit{});
    const double m0 = mass(to_conjugated(rs, f));
    spectral_drift = std::abs(mass(group_propagate_spectral(rs, f, 0.0).field) / m0 - 1.0);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      const auto closed = group_propagate_closed_form(rs, f, t, GridMode::Scaled);
      const auto spectral = group_propagate_spectral(rs, f, t, std::nullopt, closed.field.grid);
      closed_drift = std::max(closed_drift, std::abs(mass(closed.field) / m0 - 1.0));
      spectral_drift = std::max(spectral_drift, std::abs(mass(spectral.field) / m0 - 1.0));
    }
  }
  {
    const auto rs = build_root_system("A2");
    const RadialGrid grid(2, 12.0, 128);
    const auto f = sample_gaussian(grid, GaussianInit{});
    const double m0 = mass(to_conjugated(rs, f));
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      const auto closed = group_propagate_closed_form(rs, f, t, GridMode::Scaled);
      closed_drift = std::max(closed_drift, std::abs(mass(closed.field) / m0 - 1.0));
    }
  }
  rec.metric("spectral_drift", spectral_drift);
  rec.metric("closed_drift", closed_drift);
  rec.require(spectral_drift <= 1e-10);
  rec.require(closed_drift <= 1e-8);
}

// ---- 6: sharpness example ------------------------------------------------

void sharpness(Recorder& rec) {
  const RadialGrid grid(1, 8.0, 256);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.25, 1.0});
  const auto report = uniqueness_experiment_euclidean(grid, f.values, 1.0);
  rec.metric("rate_u", report.fit_u.envelope.rate);
  rec.metric("product", report.verdict.product);
  rec.require(!report.degenerate);
  rec.require(std::abs(report.fit_u.envelope.rate - 1.0 / 16.0) <= 1e-6);
  rec.require(std::abs(report.verdict.product - 1.0) <= 1e-3);
  rec.require(report.verdict.classification == Classification::Critical);
}

// ---- 7: Hardy curve and contrapositive -----------------------------------

void hardy_curve(Recorder& rec, std::uint64_t seed) {
  const RadialGrid grid(1, 12.0, 512);
  double worst = 0.0;
  double largest = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
    for (int k = 0; k < 10; ++k) {
      const double t = 0.1 * std::pow(30.0, k / 9.0);
      const auto report = uniqueness_experiment_euclidean(grid, f.values, t);
      const double exact = 16.0 * a * a * t * t / (1.0 + 16.0 * a * a * t * t);
      worst = std::max(worst, std::abs(report.verdict.product - exact));
      largest = std::max(largest, report.verdict.product);
    }
  }
  rec.metric("curve_max_error", worst);
  rec.metric("curve_max_product", largest);
  rec.require(worst <= 1e-6);
  rec.require(largest <= 1.0);

  std::mt19937_64 rng(seed);
  const auto a1 = build_root_system("A1");
  int must_vanish = 0;
  int cases = 0;
  for (int k = 0; k < 50; ++k) {
    const GaussianInit init{uniform(rng, 0.5, 2.0), uniform(rng, -0.5, 0.5), 1.0};
    const double t0 = uniform(rng, 0.25, 2.0);
    UniquenessReport report;
    if (k % 2 == 0) {
      report = uniqueness_experiment_euclidean(grid, sample_gaussian(grid, init).values, t0);
    } else {
      report = uniqueness_experiment(a1, sample_gaussian(grid, init), t0);
    }
    ++cases;
    if (!report.degenerate && report.verdict.classification == Classification::MustVanish) ++must_vanish;
  }
  rec.metric("contrapositive_cases", cases);
  rec.metric("must_vanish", must_vanish);
  rec.require(must_vanish == 0);
}

// ---- 8: dispersive decay -------------------------------------------------

void dispersive_decay(Recorder& rec) {
  std::vector<double> times;
  for (int k = 0; k <= 8; ++k) times.push_back(std::pow(10.0, k / 8.0));
  struct Case {
    const char* name;
    int n;
  };
  const Case cases[] = {{"A1", 512}, {"A2", 128}};
  for (const auto& c : cases) {
    const auto rs = build_root_system(c.name);
    const RadialGrid grid(rs.rank, 12.0, c.n);
    const auto f = sample_gaussian(grid, GaussianInit{});
    const auto sup = decay_exponent_fit(rs, f, 1.0, times);
    const auto l2 = decay_exponent_fit(rs, f, 2.0, times);
    rec.metric(std::string(c.name) + "_slope_p1", sup.slope);
    rec.metric(std::string(c.name) + "_slope_p2", l2.slope);
    rec.require(std::abs(sup.slope - sup.target) <= 0.05);
    rec.require(std::abs(l2.slope) <= 0.02);
  }
}

// ---- 9: Strichartz -------------------------------------------------------

void strichartz(Recorder& rec, std::uint64_t seed) {
  const auto p1 = strichartz_pair(1);
  const auto p2 = strichartz_pair(2);
  rec.metric("rank1_p", p1.p);
  rec.metric("rank1_q", p1.q);
  rec.metric("rank2_p", p2.p);
  rec.metric("rank2_q", p2.q);
  rec.require(std::abs(p1.p - 1.2) < 1e-15 && std::abs(p1.q - 6.0) < 1e-15 && std::abs(p2.p - 4.0 / 3.0) < 1e-15 && std::abs(p2.q - 4.0) < 1e-15);

  struct Case {
    const char* name;
    RadialGrid grid;
  };
  const Case cases[] = {{"A1", RadialGrid(1, 16.0, 512)}, {"A2", RadialGrid(2, 12.0, 128)}};
  for (const auto& c : cases) {
    const auto rs = build_root_system(c.name);
    const auto levels = strichartz_norm(rs, sample_gaussian(c.grid, GaussianInit{}), 2.0, 4);
    const double change = strichartz_stabilization(levels);
    rec.metric(std::string(c.name) + "_norm", levels.back().value);
    rec.metric(std::string(c.name) + "_stabilization", change);
    rec.require(change <= 0.02);
  }

  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 48.0, 2048);
  std::mt19937_64 rng(seed);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int k = 0; k < 20; ++k) {
    const GaussianInit data{uniform(rng, 0.5, 2.0), uniform(rng, -0.5, 0.5), uniform(rng, 0.5, 2.0)};
    const double amp = uniform(rng, 0.2, 2.0);
    const double rate = uniform(rng, 0.5, 2.0);
    const double omega = uniform(rng, 0.0, 3.0);
    const auto f = sample_gaussian(grid, data);
    const auto shape = sample_gaussian(grid, GaussianInit{rate, 0.0, 1.0});
    const Forcing psi = [&shape, amp, omega](double s) {
      BiInvariantField out = shape;
      const cplx factor = amp * std::exp(cplx(0.0, omega * s));
      for (auto& v : out.values) v *= factor;
      return out;
    };
    const auto check = strichartz_inhomogeneous_check(rs, f, psi, 2.0);
    lo = std::min(lo, check.ratio);
    hi = std::max(hi, check.ratio);
  }
  rec.metric("ratio_min", lo);
  rec.metric("ratio_max", hi);
  rec.require(lo > 0.0 && hi / lo <= 10.0);
}

// ---- 10: Heisenberg ------------------------------------------------------

void heisenberg_checks(Recorder& rec, std::uint64_t seed) {
  namespace hz = heisenberg;
  std::mt19937_64 rng(seed);
  std::vector<double> s_samples;
  for (int k = 0; k < 1000; ++k) s_samples.push_back(-10.0 + 20.0 * k / 999.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double beta = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double t_param = uniform(rng, 0.5, 5.0) * (k % 2 == 0 ? 1.0 : -1.0);
    worst = std::max(worst, hz::projection_residual(beta, t_param, s_samples));
  }
  rec.metric("circle_residual", worst);
  rec.require(worst <= 1e-12);

  bool equal = true;
  for (double t : {0.5, 1.0, std::numbers::pi, 7.25}) {
    const auto sing = hz::singularities(t, 12);
    for (int k = 1; k <= 12; ++k) equal = equal && sing[static_cast<std::size_t>(k - 1)] == hz::cutlocus_distance(k, t);
  }
  rec.metric("singularities_match_cutlocus", equal ? 1.0 : 0.0);
  rec.require(equal);

  const double t = 1.0;
  const double pole = std::numbers::pi / t;
  double previous = 0.0;
  bool monotone = true;
  double at_1e5 = 0.0;
  double largest = 0.0;
  for (int k = 0; k <= 12; ++k) {
    const double d = 1e-5 * std::pow(0.5, k);
    const double m = std::abs(hz::schrodinger_integrand(pole - d, 0.0, 0.0, t));
    if (k == 0) at_1e5 = m;
    monotone = monotone && m > previous;
    previous = m;
    largest = std::max(largest, m);
  }
  rec.metric("modulus_at_1e-5", at_1e5);
  rec.metric("modulus_max", largest);
  rec.require(monotone && largest > 1e6);
}

using Body = std::function<void(Recorder&, std::uint64_t)>;

struct Definition {
  const char* title;
  Body body;
};

const std::vector<Definition>& definitions() {
  static const std::vector<Definition> defs{
      {"Weyl group orders", [](Recorder& r, std::uint64_t) { weyl_orders(r); }},
      {"eigen-relation second-order convergence", eigen_relation},
      {"spherical transform round trip", [](Recorder& r, std::uint64_t) { round_trip(r); }},
      {"closed form matches spectral oracle", [](Recorder& r, std::uint64_t) { propagator_equivalence(r); }},
      {"mass conservation", [](Recorder& r, std::uint64_t) { mass_conservation(r); }},
      {"critical chirped Gaussian", [](Recorder& r, std::uint64_t) { sharpness(r); }},
      {"Hardy curve and contrapositive", hardy_curve},
      {"dispersive decay exponents", [](Recorder& r, std::uint64_t) { dispersive_decay(r); }},
      {"Strichartz pairs and norms", strichartz},
      {"Heisenberg singular set", heisenberg_checks},
  };
  return defs;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  const auto& defs = definitions();
  if (id < 1 || id > static_cast<int>(defs.size())) {
    fail(ErrorCode::InvalidArgument, "run_criterion: no criterion " + std::to_string(id));
  }
  const Definition& def = defs[static_cast<std::size_t>(id - 1)];
  CriterionResult result;
  result.id = id;
  result.title = def.title;
  result.pass = true;
  const auto start = std::chrono::steady_clock::now();
  Recorder rec{result};
  try {
    def.body(rec, seed);
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.detail.empty()) {
    std::ostringstream d;
    for (std::size_t i = 0; i < result.metrics.size(); ++i) {
      if (i > 0) d << ", ";
      d << result.metrics[i].first << "=" << format_number(result.metrics[i].second);
    }
    result.detail = d.str();
  }
  return result;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> first;
  for (int id = 1; id <= kCriterionCount - 1; ++id) first.push_back(run_criterion(id, seed));

  CriterionResult determinism;
  determinism.id = kCriterionCount;
  determinism.title = "byte-identical rerun";
  const auto start = std::chrono::steady_clock::now();
  std::vector<CriterionResult> second;
  for (int id = 1; id <= kCriterionCount - 1; ++id) second.push_back(run_criterion(id, seed));
  const std::string a = serialize(first);
  const std::string b = serialize(second);
  determinism.pass = a == b;
  determinism.metrics.emplace_back("bytes", static_cast<double>(a.size()));
  determinism.detail = std::string(determinism.pass ? "identical" : "outputs differ") + ", bytes=" +
                       std::to_string(a.size());
  determinism.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  first.push_back(determinism);
  return first;
}

std::string serialize(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    out << r.id << '\t' << (r.pass ? "PASS" : "FAIL") << '\t' << r.title << '\t' << r.detail << '\n';
  }
  return out.str();
}

std::string status_line(const CriterionResult& r) {
  std::ostringstream out;
  out << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " " << r.title << " (" << r.detail << ")";
  return out.str();
}

std::string summary_table(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  out << "| # | criterion | status | measurements |\n|---|---|---|---|\n";
  for (const auto& r : results) {
    out << "| " << r.id << " | " << r.title << " | " << (r.pass ? "PASS" : "FAIL") << " | " << r.detail << " |\n";
  }
  return out.str();
}

}  // namespace lsg
