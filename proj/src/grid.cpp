#include "lsg/grid.hpp"

#include "lsg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace lsg {

RadialGrid::RadialGrid(int rank, double half_width, int points_per_axis)
    : rank_(rank), half_width_(half_width), n_(points_per_axis) {
  if (rank < 1) fail(ErrorCode::DimensionError, "grid rank must be positive");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) fail(ErrorCode::InvalidArgument, "grid half-width must be positive");
  if (points_per_axis < 2 || points_per_axis % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "points per axis must be a positive even integer");
  }
  count_ = 1;
  for (int a = 0; a < rank; ++a) count_ *= static_cast<std::size_t>(points_per_axis);
}

double RadialGrid::cell_volume() const { return std::pow(spacing(), rank_); }

std::vector<double> RadialGrid::axis_coordinates() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) x[static_cast<std::size_t>(k)] = axis_coordinate(k);
  return x;
}

void RadialGrid::node(std::size_t index, std::span<double> out) const {
  for (int a = rank_ - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = axis_coordinate(static_cast<int>(index % static_cast<std::size_t>(n_)));
    index /= static_cast<std::size_t>(n_);
  }
}

Eigen::VectorXd RadialGrid::node(std::size_t index) const {
  Eigen::VectorXd h(rank_);
  node(index, std::span<double>(h.data(), static_cast<std::size_t>(rank_)));
  return h;
}

std::vector<int> RadialGrid::multi_index(std::size_t index) const {
  std::vector<int> m(static_cast<std::size_t>(rank_));
  for (int a = rank_ - 1; a >= 0; --a) {
    m[static_cast<std::size_t>(a)] = static_cast<int>(index % static_cast<std::size_t>(n_));
    index /= static_cast<std::size_t>(n_);
  }
  return m;
}

std::size_t RadialGrid::flat_index(std::span<const int> multi) const {
  std::size_t idx = 0;
  for (int k : multi) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(k);
  return idx;
}

bool RadialGrid::on_boundary(std::size_t index) const {
  for (int a = 0; a < rank_; ++a) {
    const int k = static_cast<int>(index % static_cast<std::size_t>(n_));
    if (k == 0 || k == n_ - 1) return true;
    index /= static_cast<std::size_t>(n_);
  }
  return false;
}

std::ptrdiff_t RadialGrid::locate(std::span<const double> point) const {
  const double h = spacing();
  std::size_t idx = 0;
  for (int a = 0; a < rank_; ++a) {
    const double pos = (point[static_cast<std::size_t>(a)] + half_width_) / h;
    const double k = std::round(pos);
    if (std::abs(pos - k) > 1e-9 || k < 0 || k >= n_) return -1;
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(k);
  }
  return static_cast<std::ptrdiff_t>(idx);
}

RadialGrid RadialGrid::dual() const {
  return RadialGrid(rank_, std::numbers::pi * n_ / (2.0 * half_width_), n_);
}

cplx GaussianInit::operator()(double r2) const {
  return amplitude * std::exp(cplx(-rate * r2, -chirp * r2));
}

GaussianInit parse_gaussian_init(std::string_view descriptor) {
  constexpr std::string_view prefix = "gaussian";
  if (descriptor.substr(0, prefix.size()) != prefix) {
    fail(ErrorCode::ConfigError, "init must be of the form gaussian:a=<a>[,chirp=<c>]");
  }
  GaussianInit init;
  std::string_view rest = descriptor.substr(prefix.size());
  if (rest.empty()) return init;
  if (rest.front() != ':') fail(ErrorCode::ConfigError, "init: expected ':' after 'gaussian'");
  rest.remove_prefix(1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::ConfigError, "init: expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string value(item.substr(eq + 1));
    double number = 0.0;
    try {
      std::size_t used = 0;
      number = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigError, "init: '" + value + "' is not a number");
    }
    if (key == "a" || key == "rate") {
      init.rate = number;
    } else if (key == "chirp" || key == "c") {
      init.chirp = number;
    } else if (key == "amp" || key == "amplitude") {
      init.amplitude = number;
    } else {
      fail(ErrorCode::ConfigError, "init: unknown parameter '" + std::string(key) + "'");
    }
  }
  if (!(init.rate > 0.0)) fail(ErrorCode::ConfigError, "init: gaussian rate must be positive");
  return init;
}

BiInvariantField sample_gaussian(const RadialGrid& grid, const GaussianInit& init) {
  BiInvariantField f{grid, std::vector<cplx>(grid.node_count()), Representation::Plain};
  std::vector<double> h(static_cast<std::size_t>(grid.rank()));
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, h);
    double r2 = 0.0;
    for (double x : h) r2 += x * x;
    f.values[i] = init(r2);
  }
  return f;
}

double weyl_symmetry_defect(const RootSystemSpec& rs, const RadialGrid& grid, std::span<const cplx> values,
                            bool antisymmetric) {
  const double peak = max_abs(values);
  if (peak == 0.0) return 0.0;
  double worst = 0.0;
  Eigen::VectorXd h(grid.rank());
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, std::span<double>(h.data(), static_cast<std::size_t>(grid.rank())));
    for (const auto& w : rs.weyl_group) {
      const Eigen::VectorXd image = w.matrix * h;
      const auto j = grid.locate(std::span<const double>(image.data(), static_cast<std::size_t>(image.size())));
      if (j < 0) continue;
      const double chi = antisymmetric ? w.sign : 1.0;
      worst = std::max(worst, std::abs(values[static_cast<std::size_t>(j)] - chi * values[i]));
    }
  }
  return worst / peak;
}

double max_abs(std::span<const cplx> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const RadialGrid& grid, std::span<const cplx> values) {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * grid.cell_volume());
}

double relative_l2(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionError, "relative_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

double boundary_tail(const RadialGrid& grid, std::span<const cplx> values) {
  const double peak = max_abs(values);
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (grid.on_boundary(i)) edge = std::max(edge, std::abs(values[i]));
  }
  return edge / peak;
}

}  // namespace lsg
