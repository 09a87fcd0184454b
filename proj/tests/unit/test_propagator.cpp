#include "lsg/error.hpp"
#include "lsg/propagator.hpp"
#include "lsg/spherical.hpp"
#include "oracles.hpp"

#include <doctest.h>

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

// Relative L2 distance between a conjugated field and the exact solution.
double error_vs_oracle(const RootSystemSpec& rs, const BiInvariantField& u, double a, double t) {
  const auto weyl = oracle::weyl_by_words(rs.simple_roots, rs.rank);
  std::vector<cplx> exact(u.values.size());
  for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = oracle::conjugated_solution(weyl, rs.rho, a, u.grid.node(i), t);
  return relative_l2(u.values, exact);
}

// (Delta_euclid - |rho|^2) applied to f*phi for f = exp(-a|H|^2), in closed form.
cplx shifted_operator(const RootSystemSpec& rs, double a, const Eigen::VectorXd& h) {
  const auto weyl = oracle::weyl_by_words(rs.simple_roots, rs.rank);
  cplx sum(0.0, 0.0);
  for (const auto& s : weyl) {
    const Eigen::VectorXd mu = s.m * rs.rho;
    const double e = std::exp(-a * h.squaredNorm() + mu.dot(h));
    sum += s.sign * ((mu - 2.0 * a * h).squaredNorm() - 2.0 * a * rs.rank - rs.rho.squaredNorm()) * e;
  }
  return sum;
}

}  // namespace

TEST_CASE("Euclidean Gaussian evolution matches an independent Fourier quadrature") {
  const double a = 1.0;
  const RadialGrid grid(1, 12.0, 512);
  const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
  for (double t : {0.25, 1.0}) {
    const auto u = euclidean_propagate(grid, f.values, t, GridMode::Scaled);
    // u(x) = (1/2pi) int sqrt(pi/a) e^{-k^2/4a} e^{-i t k^2} e^{i k x} dk by trapezoid on a fine k grid.
    double worst = 0.0;
    for (std::size_t i = 0; i < u.field.grid.node_count(); i += 37) {
      const double x = u.field.grid.node(i)(0);
      cplx s(0.0, 0.0);
      const double dk = 0.005;
      for (int k = -4000; k <= 4000; ++k) {
        const double kk = k * dk;
        s += std::exp(cplx(-kk * kk / (4.0 * a), kk * x - t * kk * kk));
      }
      const cplx ref = s * dk * std::sqrt(std::numbers::pi / a) / (2.0 * std::numbers::pi);
      worst = std::max(worst, std::abs(u.field.values[i] - ref));
      CHECK(std::abs(euclidean_gaussian_solution(GaussianInit{a, 0.0, 1.0}, 1, x * x, t) - ref) < 1e-8);
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("Euclidean: zero data, invalid time, chirped critical example") {
  const RadialGrid grid(1, 8.0, 256);
  std::vector<cplx> zero(grid.node_count());
  CHECK(max_abs(euclidean_propagate(grid, zero, 1.0).field.values) == 0.0);
  CHECK(code_of([&] { euclidean_propagate(grid, zero, 0.0); }) == ErrorCode::InvalidTime);
  CHECK(code_of([&] { euclidean_propagate(grid, zero, -1.0); }) == ErrorCode::InvalidTime);

  // f = exp(-|x|^2 - i|x|^2/4): |u(x, 1)| = const * exp(-|x|^2 / 16).
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.25, 1.0});
  const auto u = euclidean_propagate(grid, f.values, 1.0);
  const double c = std::abs(u.field.values[grid.node_count() / 2]);
  CHECK(c == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t i = 0; i < u.field.grid.node_count(); ++i) {
    const double x = u.field.grid.node(i)(0);
    if (std::abs(x) > 20.0) continue;
    CHECK(std::abs(std::abs(u.field.values[i]) - c * std::exp(-x * x / 16.0)) < 1e-12);
  }
}

TEST_CASE("closed form matches the exact Gaussian solution") {
  struct Case {
    const char* name;
    int n;
    double t;
  };
  for (const Case& c : {Case{"A1", 512, 0.5}, Case{"A1", 512, 3.0}, Case{"A2", 96, 1.0}, Case{"A1xA1", 96, 0.7},
                        Case{"B2", 96, 0.5}}) {
    CAPTURE(c.name);
    CAPTURE(c.t);
    const auto rs = build_root_system(c.name);
    const RadialGrid grid(rs.rank, 12.0, c.n);
    const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
    const auto u = group_propagate_closed_form(rs, f, c.t, GridMode::Scaled);
    CHECK(u.field.representation == Representation::Conjugated);
    CHECK(u.field.grid == scaled_grid(grid, c.t));
    CHECK(error_vs_oracle(rs, u.field, 1.0, c.t) < 1e-10);
  }
}

TEST_CASE("spectral oracle matches the exact Gaussian solution") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 12.0, 1024);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  for (double t : {0.5, 2.0}) {
    const auto u = group_propagate_spectral(rs, f, t);
    CHECK(u.field.grid == grid);
    CHECK(error_vs_oracle(rs, u.field, 1.0, t) < 1e-8);
  }
  // t = 0 recovers the synthesis of the transform, i.e. f * phi.
  const auto u0 = group_propagate_spectral(rs, f, 0.0);
  CHECK(relative_l2(u0.field.values, to_conjugated(rs, f).values) < 1e-10);
}

TEST_CASE("closed form at small t is close to the initial profile") {
  const auto rs = build_root_system("A1");
  const double a = 0.15;
  const double t = 1e-3;
  const RadialGrid grid(1, 20.0, 131072);
  const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
  const auto u = group_propagate_closed_form(rs, f, t, GridMode::Scaled);
  std::vector<cplx> initial(u.field.values.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    initial[i] = oracle::conjugated_solution(oracle::weyl_by_words(rs.simple_roots, 1), rs.rho, a, u.field.grid.node(i), 0.0);
  }
  CHECK(relative_l2(u.field.values, initial) <= 1e-3);
}

TEST_CASE("FIXED closed form equals SCALED closed form at coinciding nodes") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 12.0, 2048);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  const auto fixed = group_propagate_closed_form(rs, f, 1.0, GridMode::Fixed);
  CHECK(error_vs_oracle(rs, fixed.field, 1.0, 1.0) < 1e-10);
}

TEST_CASE("calibrated propagator constant is the Fresnel factor") {
  for (const char* name : {"A1", "A2"}) {
    const auto rs = build_root_system(name);
    CHECK(std::abs(propagator_constant(rs) - fresnel_constant(rs.rank)) < 1e-8);
  }
  CHECK(std::abs(fresnel_constant(1) - std::pow(cplx(0.0, 4.0 * std::numbers::pi), -0.5)) < 1e-15);
  CHECK(std::abs(fresnel_constant(2) - 1.0 / cplx(0.0, 4.0 * std::numbers::pi)) < 1e-15);
}

TEST_CASE("mass is conserved") {
  const auto rs = build_root_system("A2");
  const RadialGrid grid(2, 12.0, 96);
  const auto f = sample_gaussian(grid, GaussianInit{0.7, 0.1, 1.0});
  const double m0 = mass(to_conjugated(rs, f));
  for (double t : {1.0, 2.0, 4.0}) {
    CHECK(std::abs(mass(group_propagate_closed_form(rs, f, t).field) / m0 - 1.0) < 1e-8);
  }
}

TEST_CASE("group law and time reversal (spectral method)") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 24.0, 1536);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  const auto one = group_propagate_spectral(rs, f, 0.4);
  const auto two = group_propagate_spectral(rs, one.field, 0.6);
  const auto direct = group_propagate_spectral(rs, f, 1.0);
  CHECK(relative_l2(two.field.values, direct.field.values) < 1e-6);

  BiInvariantField reversed = direct.field;
  for (auto& v : reversed.values) v = std::conj(v);
  const auto back = group_propagate_spectral(rs, reversed, 1.0);
  auto expected = to_conjugated(rs, f).values;
  for (auto& v : expected) v = std::conj(v);
  CHECK(relative_l2(back.field.values, expected) < 1e-6);
}

TEST_CASE("Weyl antisymmetry of u*phi is preserved") {
  const auto rs = build_root_system("B2");
  const RadialGrid grid(2, 10.0, 96);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.2, 1.0});
  for (double t : {1.0, 2.0}) {
    const auto u = group_propagate_closed_form(rs, f, t);
    CHECK(weyl_symmetry_defect(rs, u.field.grid, u.field.values, true) < 1e-8);
  }
}

TEST_CASE("under-resolved spectral phase is refused") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 12.0, 256);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  CHECK(code_of([&] { group_propagate_spectral(rs, f, 50.0, RadialGrid(1, 12.0, 64)); }) ==
        ErrorCode::UnderResolvedPhase);
}

TEST_CASE("Duhamel: zero forcing equals the homogeneous closed form") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 12.0, 1024);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  const Forcing zero = [&](double) { return BiInvariantField{grid, std::vector<cplx>(grid.node_count()), Representation::Conjugated}; };
  const auto u = duhamel_solve(rs, f, zero, 0.8, 8);
  const auto ref = group_propagate_closed_form(rs, f, 0.8, GridMode::Fixed);
  CHECK(relative_l2(u.field.values, ref.field.values) < 1e-12);
}

TEST_CASE("Duhamel: manufactured solution u = (1 + t) exp(-a|H|^2)") {
  // -i u_t - Delta u = psi with psi*phi = -i f phi - (1 + s)(Delta_euclid - |rho|^2)(f phi).
  const auto rs = build_root_system("A1");
  const double a = 1.0;
  const RadialGrid grid(1, 12.0, 1024);
  const auto f = sample_gaussian(grid, GaussianInit{a, 0.0, 1.0});
  const auto fphi = to_conjugated(rs, f);
  std::vector<cplx> op(grid.node_count());
  for (std::size_t i = 0; i < op.size(); ++i) op[i] = shifted_operator(rs, a, grid.node(i));
  const Forcing psi = [&](double s) {
    BiInvariantField out{grid, std::vector<cplx>(grid.node_count()), Representation::Conjugated};
    for (std::size_t i = 0; i < op.size(); ++i) out.values[i] = cplx(0.0, -1.0) * fphi.values[i] - (1.0 + s) * op[i];
    return out;
  };
  const double t = 0.5;
  const auto u = duhamel_solve(rs, f, psi, t, 64);
  std::vector<cplx> expected(fphi.values.size());
  for (std::size_t i = 0; i < expected.size(); ++i) expected[i] = (1.0 + t) * fphi.values[i];
  CHECK(relative_l2(u.field.values, expected) < 1e-6);
}

TEST_CASE("Duhamel: forcing that is not antisymmetric is rejected") {
  const auto rs = build_root_system("A1");
  const RadialGrid grid(1, 12.0, 512);
  const auto f = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
  const Forcing even = [&](double) {
    auto g = sample_gaussian(grid, GaussianInit{1.0, 0.0, 1.0});
    g.representation = Representation::Conjugated;  // even, so not a valid u*phi
    return g;
  };
  CHECK(code_of([&] { duhamel_solve(rs, f, even, 0.5, 8); }) == ErrorCode::ForcingNotAntisymmetrizable);
}
