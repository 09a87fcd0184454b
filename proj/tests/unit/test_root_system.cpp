#include "lsg/error.hpp"
#include "lsg/root_system.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace lsg;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const char* const kSystems[] = {"A1", "A2", "B2", "G2", "A1xA1"};

}  // namespace

TEST_CASE("Weyl group orders") {
  CHECK(build_root_system("A1").weyl_group.size() == 2);
  CHECK(build_root_system("A2").weyl_group.size() == 6);
  CHECK(build_root_system("B2").weyl_group.size() == 8);
  CHECK(build_root_system("G2").weyl_group.size() == 12);
  CHECK(build_root_system("A1xA1").weyl_group.size() == 4);
  CHECK(build_root_system("A1xA2").weyl_group.size() == 12);
}

TEST_CASE("A1 roots and rho") {
  const auto rs = build_root_system("A1");
  REQUIRE(rs.rank == 1);
  REQUIRE(rs.roots.size() == 2);
  REQUIRE(rs.positive_roots.size() == 1);
  const double alpha = rs.positive_roots[0](0);
  CHECK(alpha * alpha == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rs.rho(0) == doctest::Approx(alpha / 2.0).epsilon(1e-14));
  const auto& w = weyl_group(rs);
  CHECK(w[0].sign == 1.0);
  CHECK(w[0].matrix(0, 0) == 1.0);
  CHECK(w[1].sign == -1.0);
  CHECK(w[1].matrix(0, 0) == -1.0);
}

TEST_CASE("A2 has 6 roots, 3 positive") {
  const auto rs = build_root_system("A2");
  CHECK(rs.roots.size() == 6);
  CHECK(rs.positive_roots.size() == 3);
  CHECK(rs.simple_roots.size() == 2);
}

TEST_CASE("G2 matches an enumeration by reflection words") {
  const auto rs = build_root_system("G2");
  CHECK(rs.roots.size() == 12);
  const auto words = oracle::weyl_by_words(rs.simple_roots, rs.rank);
  REQUIRE(words.size() == rs.weyl_group.size());
  for (const auto& e : words) {
    const bool found = std::any_of(rs.weyl_group.begin(), rs.weyl_group.end(), [&](const WeylElement& w) {
      return (w.matrix - e.m).cwiseAbs().maxCoeff() < 1e-9 && w.sign == e.sign;
    });
    CHECK(found);
  }
  // Long roots have squared length 2, short ones 2/3.
  std::vector<double> lengths;
  for (const auto& r : rs.roots) lengths.push_back(r.squaredNorm());
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths.front() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(lengths.back() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("B2 signs sum to zero") {
  const auto rs = build_root_system("B2");
  double sum = 0.0;
  for (const auto& w : rs.weyl_group) sum += w.sign;
  CHECK(rs.weyl_group.size() == 8);
  CHECK(sum == 0.0);
}

TEST_CASE("normalization scales roots linearly") {
  const auto a = build_root_system("B2");
  const auto b = build_root_system("B2", 3.0);
  for (std::size_t i = 0; i < a.roots.size(); ++i) CHECK((b.roots[i] - 3.0 * a.roots[i]).norm() < 1e-12);
  CHECK((b.rho - 3.0 * a.rho).norm() < 1e-12);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(build_root_system("F4"), Error);
  try {
    build_root_system("E8");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedRootSystem);
  }
  const auto rs = build_root_system("A2");
  try {
    pairing(rs, CartanVector{vec({1.0})}, CartanVector{vec({1.0, 2.0})});
    FAIL("expected DimensionError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionError);
  }
  // Reflections in a degenerate set of generators close quickly; a rotation of
  // irrational angle never does.
  const double c = std::cos(1.0), s = std::sin(1.0);
  Eigen::MatrixXd rot(2, 2);
  rot << c, -s, s, c;
  try {
    close_matrix_group({rot}, 100);
    FAIL("expected ClosureOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClosureOverflow);
  }
}

TEST_CASE("pairing examples") {
  const auto rs = build_root_system("A2");
  CHECK(pairing(rs, CartanVector{vec({0.0, 0.0})}, CartanVector{vec({0.0, 0.0})}) == 0.0);
  CHECK(pairing(rs, CartanVector{rs.simple_roots[0]}, CartanVector{rs.simple_roots[0]}) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("dominant representative examples") {
  const auto a1 = build_root_system("A1");
  const Eigen::VectorXd alpha = a1.positive_roots[0];
  const auto r = dominant_representative(a1, CartanVector{-0.7 * alpha});
  CHECK((r.point.coords - 0.7 * alpha).norm() < 1e-14);
  CHECK(r.element.sign == -1.0);
  const auto same = dominant_representative(a1, CartanVector{0.7 * alpha});
  CHECK(same.element.sign == 1.0);
  CHECK((same.element.matrix - Eigen::MatrixXd::Identity(1, 1)).norm() == 0.0);
}

TEST_CASE("property: pairing is Weyl invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const char* name : kSystems) {
    const auto rs = build_root_system(name);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd h1(rs.rank), h2(rs.rank);
      for (int k = 0; k < rs.rank; ++k) {
        h1(k) = u(rng);
        h2(k) = u(rng);
      }
      const double base = pairing(rs, CartanVector{h1}, CartanVector{h2});
      for (const auto& w : rs.weyl_group) {
        CHECK(std::abs(pairing(rs, CartanVector{w.matrix * h1}, CartanVector{w.matrix * h2}) - base) <= 1e-12);
      }
    }
  }
}

TEST_CASE("property: signs sum to zero, orbits are free, representatives idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const char* name : kSystems) {
    CAPTURE(name);
    const auto rs = build_root_system(name);
    double sum = 0.0;
    for (const auto& w : rs.weyl_group) sum += w.sign;
    CHECK(sum == 0.0);

    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd h(rs.rank);
      for (int k = 0; k < rs.rank; ++k) h(k) = u(rng);
      const auto dom = dominant_representative(rs, CartanVector{h});
      CHECK((dom.element.matrix * h - dom.point.coords).norm() < 1e-12);
      for (const auto& a : rs.positive_roots) CHECK(a.dot(dom.point.coords) >= -1e-12);
      const auto again = dominant_representative(rs, dom.point);
      CHECK((again.point.coords - dom.point.coords).norm() < 1e-12);
      CHECK((again.element.matrix - Eigen::MatrixXd::Identity(rs.rank, rs.rank)).norm() < 1e-12);

      // A generic point is strictly dominant after reduction: its orbit has |W| points.
      std::vector<Eigen::VectorXd> orbit;
      for (const auto& w : rs.weyl_group) {
        const Eigen::VectorXd p = w.matrix * dom.point.coords;
        const bool seen =
            std::any_of(orbit.begin(), orbit.end(), [&](const Eigen::VectorXd& q) { return (q - p).norm() < 1e-9; });
        if (!seen) orbit.push_back(p);
      }
      CHECK(orbit.size() == rs.weyl_group.size());
    }
  }
}

TEST_CASE("property: rho is half the sum of positive roots and W permutes roots") {
  for (const char* name : kSystems) {
    const auto rs = build_root_system(name);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(rs.rank);
    for (const auto& a : rs.positive_roots) sum += a;
    CHECK((0.5 * sum - rs.rho).norm() < 1e-14);
    for (const auto& w : rs.weyl_group) {
      CHECK(std::abs(std::abs(w.matrix.determinant()) - 1.0) < 1e-12);
      CHECK(w.matrix.determinant() * w.sign > 0.0);
      for (const auto& r : rs.roots) {
        const Eigen::VectorXd img = w.matrix * r;
        const bool found =
            std::any_of(rs.roots.begin(), rs.roots.end(), [&](const Eigen::VectorXd& q) { return (q - img).norm() < 1e-9; });
        CHECK(found);
      }
    }
  }
}
