#include "lsg/error.hpp"
#include "lsg/spherical.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lsg;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

cplx phi_at(const RootSystemSpec& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& h) {
  return spherical_function(rs, SpectralVector{lambda}, CartanVector{h});
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvariantViolation;
}

}  // namespace

TEST_CASE("Weyl denominator is antisymmetric and the density vanishes at 0") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* name : {"A1", "A2", "B2", "G2", "A1xA1"}) {
    const auto rs = build_root_system(name);
    CHECK(density(rs, CartanVector{Eigen::VectorXd::Zero(rs.rank)}) == 0.0);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd h(rs.rank);
      for (int k = 0; k < rs.rank; ++k) h(k) = u(rng);
      const double base = weyl_denominator(rs, CartanVector{h});
      for (const auto& w : rs.weyl_group) {
        const double img = weyl_denominator(rs, CartanVector{w.matrix * h});
        CHECK(std::abs(img - w.sign * base) <= 1e-12 * std::max(1.0, std::abs(base)));
      }
    }
  }
}

TEST_CASE("c-function") {
  const auto rs = build_root_system("A2");
  CHECK(code_of([&] { c_function(rs, SpectralVector{vec({0.0, 1.0})}); }) == ErrorCode::SingularSpectralParameter);
  CHECK(is_singular_spectral(rs, vec({0.0, 1.0})));
  CHECK_FALSE(is_singular_spectral(rs, vec({0.3, 0.7})));
  // |c(lambda)|^-2 -> 0 as lambda -> 0 along a regular direction.
  double previous = std::numeric_limits<double>::infinity();
  for (double r : {1.0, 0.1, 0.01, 0.001}) {
    const double inv = std::pow(std::abs(c_function(rs, SpectralVector{r * vec({0.3, 0.7})})), -2.0);
    CHECK(inv < previous);
    previous = inv;
  }
  CHECK(previous < 1e-15);
}

TEST_CASE("spherical function normalization, symmetry and oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* name : {"A1", "A2", "B2", "G2", "A1xA1"}) {
    CAPTURE(name);
    const auto rs = build_root_system(name);
    const auto weyl = oracle::weyl_by_words(rs.simple_roots, rs.rank);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd lambda(rs.rank), h(rs.rank);
      do {
        for (int k = 0; k < rs.rank; ++k) lambda(k) = u(rng);
      } while (is_singular_spectral(rs, lambda) || oracle::pi_poly(rs, lambda) == 0.0 ||
               std::abs(oracle::pi_poly(rs, lambda)) < 1e-3);
      do {
        for (int k = 0; k < rs.rank; ++k) h(k) = u(rng);
      } while (distance_to_walls(rs, std::span<const double>(h.data(), static_cast<std::size_t>(rs.rank))) < 0.1);
      CHECK(std::abs(phi_at(rs, lambda, Eigen::VectorXd::Zero(rs.rank)) - 1.0) <= 1e-10);
      const cplx v = phi_at(rs, lambda, h);
      CHECK(std::abs(v - oracle::spherical_function(rs, weyl, lambda, h)) <= 1e-10 * std::max(1.0, std::abs(v)));
      for (const auto& w : rs.weyl_group) {
        CHECK(std::abs(phi_at(rs, w.matrix * lambda, h) - v) <= 1e-10);
        CHECK(std::abs(phi_at(rs, lambda, w.matrix * h) - v) <= 1e-10);
      }
    }
  }
}

TEST_CASE("A1: phi_lambda(H) = rho(H) sin(lambda H) / (lambda H sinh rho(H)) and its lambda -> 0 limit") {
  const auto rs = build_root_system("A1");
  const double rho = rs.rho(0);
  for (double h : {0.3, 1.0, 2.5, -1.7}) {
    const double lambda = 0.8;
    const cplx v = phi_at(rs, vec({lambda}), vec({h}));
    CHECK(std::abs(v - rho * std::sin(lambda * h) / (lambda * std::sinh(rho * h))) < 1e-13);
    const cplx small = phi_at(rs, vec({1e-5}), vec({h}));
    CHECK(std::abs(small - rho * h / std::sinh(rho * h)) < 1e-8);
  }
}

TEST_CASE("wall evaluation") {
  const auto rs = build_root_system("A2");
  const Eigen::VectorXd wall = vec({0.0, 1.3});  // orthogonal to the first simple root
  CHECK(is_wall(rs, std::vector<double>{0.0, 1.3}));
  CHECK_FALSE(is_wall(rs, std::vector<double>{0.4, 1.3}));
  CHECK(code_of([&] { phi_at(rs, vec({0.3, 0.7}), wall); }) == ErrorCode::ChamberWallEvaluation);
  CHECK(distance_to_walls(rs, std::vector<double>{0.25, 3.0}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("transform examples: zero, reality symmetry, Gaussian oracle") {
  for (const char* name : {"A1", "A2"}) {
    CAPTURE(name);
    const auto rs = build_root_system(name);
    const auto weyl = oracle::weyl_by_words(rs.simple_roots, rs.rank);
    const RadialGrid grid(rs.rank, 10.0, rs.rank == 1 ? 256 : 96);
    const RadialGrid spectral(rs.rank, 6.0, rs.rank == 1 ? 64 : 24);

    BiInvariantField zero{grid, std::vector<cplx>(grid.node_count()), Representation::Plain};
    CHECK(max_abs(spherical_transform(rs, zero, spectral).values) == 0.0);
    CHECK(max_abs(inverse_spherical_transform(rs, SpectralField{spectral, std::vector<cplx>(spectral.node_count())}, grid)
                      .values) == 0.0);

    const double a = 1.0;
    const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
    const auto F = spherical_transform(rs, f, spectral);
    const double peak = max_abs(F.values);
    CHECK(weyl_symmetry_defect(rs, spectral, F.values, false) < 1e-10);
    for (std::size_t i = 0; i < spectral.node_count(); ++i) {
      const Eigen::VectorXd lam = spectral.node(i);
      if (is_singular_spectral(rs, lam)) continue;
      CHECK(std::abs(F.values[i] - oracle::gaussian_transform(rs, weyl, a, lam)) <= 1e-10 * peak);
      // f real and W-invariant: F(-lambda) = conj F(lambda).
      std::vector<double> neg(static_cast<std::size_t>(rs.rank));
      for (int k = 0; k < rs.rank; ++k) neg[static_cast<std::size_t>(k)] = -lam(k);
      const auto j = spectral.locate(neg);
      if (j >= 0) CHECK(std::abs(F.values[static_cast<std::size_t>(j)] - std::conj(F.values[i])) <= 1e-12 * peak);
    }
  }
}

TEST_CASE("reduced transform agrees with the direct transform") {
  for (const char* name : {"A1", "A2"}) {
    const auto rs = build_root_system(name);
    const RadialGrid grid(rs.rank, 10.0, rs.rank == 1 ? 256 : 64);
    const auto f = sample_gaussian(grid, GaussianInit{0.8, 0.0, 1.0});
    const auto direct = spherical_transform(rs, f, grid.dual());
    const auto reduced = spherical_transform_reduced(rs, f, grid.dual());
    CHECK(relative_l2(reduced.values, direct.values) < 1e-10);
  }
}

TEST_CASE("round trip on A1 for a range of rates") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 12.0, 512);
  for (double a : {0.5, 0.75, 1.25, 2.0}) {
    const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
    const auto back = inverse_spherical_transform(rs, spherical_transform(rs, f, grid.dual()), grid);
    CHECK(relative_l2_density(rs, back, f) <= 1e-6);
  }
}

TEST_CASE("single-mode synthesis reproduces the spherical function") {
  // A spectral field concentrated on one node lambda0 (and its Weyl images,
  // through the synthesis sum) yields a multiple of phi_lambda0.
  const auto rs = build_root_system("A2");
  const RadialGrid spectral(2, 4.0, 16);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < spectral.node_count(); ++i) {
    const Eigen::VectorXd lam = spectral.node(i);
    // Interior node, away from the boundary band checked by the synthesis.
    if (!is_singular_spectral(rs, lam) && lam.norm() > 1.0 && lam.cwiseAbs().maxCoeff() <= 2.0) {
      idx = i;
      break;
    }
  }
  const Eigen::VectorXd lam0 = spectral.node(idx);
  SpectralField F{spectral, std::vector<cplx>(spectral.node_count())};
  F.values[idx] = 1.0;
  const RadialGrid grid(2, 3.0, 16);
  const auto u = inverse_spherical_transform(rs, F, grid);
  std::vector<double> h(2);
  cplx scale(0.0, 0.0);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, h);
    if (distance_to_walls(rs, h) < 0.2) continue;
    const cplx expect = phi_at(rs, lam0, grid.node(i));
    if (scale == cplx(0.0, 0.0)) scale = u.values[i] / expect;
    CHECK(std::abs(u.values[i] - scale * expect) <= 1e-10 * std::abs(scale));
  }
  CHECK(std::abs(scale) > 0.0);
}

TEST_CASE("radial Laplacian: eigen-relation with O(h^2) residual") {
  const auto rs = build_root_system("A1");
  const Eigen::VectorXd lambda = vec({1.3});
  const double eigen = lambda.squaredNorm() + rs.rho.squaredNorm();
  double previous = 0.0;
  for (int n : {512, 1024}) {
    const RadialGrid grid(1, 8.0, n);
    BiInvariantField f{grid, std::vector<cplx>(grid.node_count()), Representation::Plain};
    for (std::size_t i = 0; i < grid.node_count(); ++i) f.values[i] = phi_at(rs, lambda, grid.node(i));
    const auto lap = radial_laplacian(rs, f);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      const double h = grid.node(i)(0);
      if (grid.on_boundary(i) || std::abs(h) < 0.5) continue;
      worst = std::max(worst, std::abs(lap.values[i] + eigen * f.values[i]));
    }
    if (previous > 0.0) CHECK(previous / worst == doctest::Approx(4.0).epsilon(0.05));
    previous = worst;
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("radial Laplacian: phi_0 has eigenvalue -|rho|^2") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 8.0, 2048);
  const double rho = rs.rho(0);
  BiInvariantField f{grid, std::vector<cplx>(grid.node_count()), Representation::Plain};
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const double h = grid.node(i)(0);
    f.values[i] = h == 0.0 ? 1.0 : rho * h / std::sinh(rho * h);
  }
  const auto lap = radial_laplacian(rs, f);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const double h = grid.node(i)(0);
    if (grid.on_boundary(i) || std::abs(h) < 0.5) continue;
    CHECK(std::abs(lap.values[i] + rho * rho * f.values[i]) < 1e-5);
  }
}

TEST_CASE("Plancherel constant: calibrated equals 1 / (|W|^2 (2 pi)^l)") {
  for (const char* name : {"A1", "A2", "A1xA1"}) {
    const auto rs = build_root_system(name);
    const double w = static_cast<double>(rs.weyl_group.size());
    const double analytic = 1.0 / (w * w * std::pow(2.0 * std::numbers::pi, rs.rank));
    CHECK(plancherel_constant_analytic(rs) == doctest::Approx(analytic).epsilon(1e-15));
    CHECK(std::abs(plancherel_constant(rs) / analytic - 1.0) < 1e-10);
  }
  CHECK(code_of([] { plancherel_constant(build_root_system("A1xA2")); }) == ErrorCode::DimensionError);
}

TEST_CASE("grid adequacy") {
  const auto rs = build_root_system("A1");
  const RadialGrid small(1, 2.0, 64);
  const auto f = sample_gaussian(small, GaussianInit{0.5, 0.0, 1.0});
  CHECK(code_of([&] { spherical_transform(rs, f, small.dual()); }) == ErrorCode::GridTooSmall);
}

TEST_CASE("conjugation round trip and wall handling") {
  const auto rs = build_root_system("A2");
  const RadialGrid grid(2, 6.0, 32);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  const auto conj = to_conjugated(rs, f);
  CHECK(weyl_symmetry_defect(rs, grid, conj.values, true) < 1e-12);
  const auto back = to_plain(rs, conj);
  std::vector<double> h(2);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, h);
    if (is_wall(rs, h)) {
      CHECK(conj.values[i] == cplx(0.0, 0.0));
      CHECK(std::isnan(back.values[i].real()));
    } else {
      CHECK(std::abs(back.values[i] - f.values[i]) <= 1e-12);
    }
  }
}
