#include "lsg/root_system.hpp"

#include "lsg/error.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <sstream>

namespace lsg {
namespace {

using Key = std::vector<long long>;

Key round_key(const Eigen::MatrixXd& m) {
  Key key(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) key[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e9);
  return key;
}

std::vector<Eigen::VectorXd> factor_simple_roots(std::string_view factor) {
  const double r2 = std::sqrt(2.0);
  std::vector<Eigen::VectorXd> simple;
  if (factor == "A1") {
    simple.push_back(Eigen::VectorXd::Constant(1, r2));
  } else if (factor == "A2") {
    simple.push_back(Eigen::Vector2d(r2, 0.0));
    simple.push_back(Eigen::Vector2d(-r2 / 2.0, std::sqrt(6.0) / 2.0));
  } else if (factor == "B2") {
    simple.push_back(Eigen::Vector2d(1.0, -1.0));  // long
    simple.push_back(Eigen::Vector2d(0.0, 1.0));   // short
  } else if (factor == "G2") {
    simple.push_back(Eigen::Vector2d(std::sqrt(2.0 / 3.0), 0.0));               // short
    simple.push_back(Eigen::Vector2d(-std::sqrt(6.0) / 2.0, std::sqrt(2.0) / 2.0));  // long
  } else {
    fail(ErrorCode::UnsupportedRootSystem, "unknown root system factor '" + std::string(factor) + "'");
  }
  return simple;
}

std::vector<std::string_view> split_factors(std::string_view name) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= name.size()) {
    const std::size_t pos = name.find_first_of("xX*", start);
    const std::size_t end = pos == std::string_view::npos ? name.size() : pos;
    out.push_back(name.substr(start, end - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Eigen::MatrixXd reflection_matrix(const Eigen::VectorXd& root) {
  const auto l = root.size();
  return Eigen::MatrixXd::Identity(l, l) - 2.0 * root * root.transpose() / root.squaredNorm();
}

void validate(const RootSystemSpec& rs) {
  for (const auto& a : rs.positive_roots) {
    if (rs.rho.dot(a) <= 0.0) fail(ErrorCode::InvariantViolation, "rho not strictly dominant in " + rs.name);
  }
  if (rs.roots.size() != 2 * rs.positive_roots.size()) {
    fail(ErrorCode::InvariantViolation, "positive roots do not halve the root set of " + rs.name);
  }
  for (const auto& w : rs.weyl_group) {
    const Eigen::MatrixXd defect = w.matrix.transpose() * w.matrix - Eigen::MatrixXd::Identity(rs.rank, rs.rank);
    if (defect.cwiseAbs().maxCoeff() > 1e-12) fail(ErrorCode::InvariantViolation, "non-orthogonal Weyl element");
  }
}

}  // namespace

Eigen::VectorXd reflect(const Eigen::VectorXd& v, const Eigen::VectorXd& root) {
  return v - 2.0 * v.dot(root) / root.squaredNorm() * root;
}

std::vector<Eigen::MatrixXd> close_matrix_group(const std::vector<Eigen::MatrixXd>& generators, std::size_t cap) {
  if (generators.empty()) return {};
  const auto l = generators.front().rows();
  std::vector<Eigen::MatrixXd> elements{Eigen::MatrixXd::Identity(l, l)};
  std::map<Key, std::size_t> seen{{round_key(elements.front()), 0}};
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      Eigen::MatrixXd next = g * elements[idx];
      auto key = round_key(next);
      if (seen.contains(key)) continue;
      if (elements.size() >= cap) {
        fail(ErrorCode::ClosureOverflow, "group closure exceeded " + std::to_string(cap) + " elements");
      }
      seen.emplace(std::move(key), elements.size());
      queue.push_back(elements.size());
      elements.push_back(std::move(next));
    }
  }
  return elements;
}

RootSystemSpec build_root_system(std::string_view name, double normalization) {
  if (!(normalization > 0.0) || !std::isfinite(normalization)) {
    fail(ErrorCode::InvalidArgument, "root normalization must be positive");
  }
  const auto factors = split_factors(name);
  std::vector<std::vector<Eigen::VectorXd>> blocks;
  int rank = 0;
  for (auto f : factors) {
    if (f.empty()) fail(ErrorCode::UnsupportedRootSystem, "malformed root system name '" + std::string(name) + "'");
    blocks.push_back(factor_simple_roots(f));
    rank += static_cast<int>(blocks.back().front().size());
  }

  RootSystemSpec rs;
  rs.name = std::string(name);
  rs.rank = rank;
  rs.normalization = normalization;
  rs.inner_product = Eigen::MatrixXd::Identity(rank, rank);

  int offset = 0;
  for (const auto& block : blocks) {
    const auto dim = block.front().size();
    for (const auto& a : block) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(rank);
      v.segment(offset, dim) = a * normalization;
      rs.simple_roots.push_back(std::move(v));
    }
    offset += static_cast<int>(dim);
  }

  std::vector<Eigen::MatrixXd> generators;
  for (const auto& a : rs.simple_roots) generators.push_back(reflection_matrix(a));
  for (auto& m : close_matrix_group(generators)) {
    const double det = m.determinant();
    rs.weyl_group.push_back(WeylElement{std::move(m), det > 0.0 ? 1.0 : -1.0});
  }

  // Every root is a Weyl image of a simple root.
  std::map<Key, std::size_t> seen;
  for (const auto& w : rs.weyl_group) {
    for (const auto& a : rs.simple_roots) {
      Eigen::VectorXd r = w.matrix * a;
      auto key = round_key(r);
      if (seen.contains(key)) continue;
      seen.emplace(std::move(key), rs.roots.size());
      rs.roots.push_back(std::move(r));
    }
  }

  // Positive roots: positive on the vector dual to the simple roots.
  Eigen::MatrixXd simple(rank, rank);
  for (int i = 0; i < rank; ++i) simple.row(i) = rs.simple_roots[static_cast<std::size_t>(i)].transpose();
  const Eigen::VectorXd regular = simple.fullPivLu().solve(Eigen::VectorXd::Ones(rank));
  rs.rho = Eigen::VectorXd::Zero(rank);
  for (const auto& r : rs.roots) {
    if (r.dot(regular) > 0.0) {
      rs.positive_roots.push_back(r);
      rs.rho += 0.5 * r;
    }
  }
  validate(rs);
  return rs;
}

const std::vector<WeylElement>& weyl_group(const RootSystemSpec& rs) { return rs.weyl_group; }

double pairing(const RootSystemSpec& rs, const CartanVector& h1, const CartanVector& h2) {
  if (h1.coords.size() != rs.rank || h2.coords.size() != rs.rank) {
    std::ostringstream msg;
    msg << "pairing expects vectors of length " << rs.rank << ", got " << h1.coords.size() << " and "
        << h2.coords.size();
    fail(ErrorCode::DimensionError, msg.str());
  }
  return h1.coords.dot(rs.inner_product * h2.coords);
}

DominantResult dominant_representative(const RootSystemSpec& rs, const CartanVector& h) {
  if (h.coords.size() != rs.rank) fail(ErrorCode::DimensionError, "dominant_representative: rank mismatch");
  Eigen::VectorXd point = h.coords;
  Eigen::MatrixXd element = Eigen::MatrixXd::Identity(rs.rank, rs.rank);
  double sign = 1.0;
  const double scale = std::max(point.norm(), 1e-300);
  // Each reflection in a simple root with negative pairing strictly shortens
  // the distance to the dominant chamber; |W| steps always suffice.
  for (std::size_t iter = 0; iter <= rs.weyl_group.size(); ++iter) {
    const Eigen::VectorXd* offending = nullptr;
    for (const auto& a : rs.simple_roots) {
      if (point.dot(a) < -1e-13 * scale * a.norm()) {
        offending = &a;
        break;
      }
    }
    if (offending == nullptr) break;
    const Eigen::MatrixXd r = reflection_matrix(*offending);
    point = r * point;
    element = r * element;
    sign = -sign;
  }
  return DominantResult{CartanVector{point}, WeylElement{element, sign}};
}

}  // namespace lsg
