#include "lsg/estimates.hpp"

#include "lsg/error.hpp"
#include "lsg/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lsg {
namespace {

void require_q(double q) {
  if (!(q >= 2.0)) {
    std::ostringstream msg;
    msg << "weighted_norm: exponent q = " << q << " is below 2";
    fail(ErrorCode::UnsupportedExponent, msg.str());
  }
}

double lq_power_sum(const RadialGrid& grid, std::span<const cplx> values, double q) {
  double s = 0.0;
  for (const auto& v : values) s += std::pow(std::abs(v), q);
  return s * grid.cell_volume();
}

// Dyadic partition of (0, T]: [0, T/2^K] then [T/2^(k+1), T/2^k].
std::vector<std::pair<double, double>> dyadic_intervals(double T, int levels) {
  std::vector<std::pair<double, double>> out;
  out.emplace_back(0.0, T / std::ldexp(1.0, levels));
  for (int k = levels - 1; k >= 0; --k) out.emplace_back(T / std::ldexp(1.0, k + 1), T / std::ldexp(1.0, k));
  return out;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_legendre: need at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

double weighted_norm(const BiInvariantField& conjugated, double q) {
  require_q(q);
  if (std::isinf(q)) return max_abs(conjugated.values);
  return std::pow(lq_power_sum(conjugated.grid, conjugated.values, q), 1.0 / q);
}

double weighted_norm_assembled(const RootSystemSpec& rs, const BiInvariantField& plain, double q) {
  require_q(q);
  const BiInvariantField u = to_plain(rs, plain);
  const auto phi = weyl_denominator_on(rs, u.grid);
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (std::isfinite(u.values[i].real())) m = std::max(m, std::abs(u.values[i]) * std::abs(phi[i]));
    }
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!std::isfinite(u.values[i].real())) continue;
    s += std::pow(std::abs(u.values[i]), q) * std::pow(std::abs(phi[i]), q - 2.0) * phi[i] * phi[i];
  }
  return std::pow(s * u.grid.cell_volume(), 1.0 / q);
}

ExponentPair strichartz_pair(int rank) {
  if (rank < 1) fail(ErrorCode::DimensionError, "strichartz_pair: rank must be positive");
  const double l = rank;
  return {2.0 * (l + 2.0) / (l + 4.0), 2.0 * (l + 2.0) / l};
}

double dual_exponent(double p) {
  if (!(p >= 1.0)) fail(ErrorCode::UnsupportedExponent, "dual_exponent: p must be at least 1");
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

DecayFit decay_exponent_fit(const RootSystemSpec& rs, const BiInvariantField& f, double p,
                            const std::vector<double>& times, double t_min) {
  if (!(p >= 1.0 && p <= 2.0)) fail(ErrorCode::UnsupportedExponent, "decay_exponent_fit: p must lie in [1, 2]");
  if (times.size() < 5) fail(ErrorCode::InsufficientTimes, "decay_exponent_fit: need at least 5 times");
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  if (*lo < t_min) {
    std::ostringstream msg;
    msg << "decay_exponent_fit: time " << *lo << " precedes the asymptotic window t >= " << t_min;
    fail(ErrorCode::InsufficientTimes, msg.str());
  }
  if (*hi < 10.0 * *lo) fail(ErrorCode::InsufficientTimes, "decay_exponent_fit: times must span a decade");
  const double q = dual_exponent(p);

  DecayFit fit;
  fit.target = -rs.rank * (1.0 / p - 0.5);
  fit.times = times;
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx;
  std::vector<double> ly;
  for (double t : times) {
    const auto u = group_propagate_closed_form(rs, f, t, GridMode::Scaled);
    const double norm = weighted_norm(u.field, q);
    fit.norms.push_back(norm);
    lx.push_back(std::log(t));
    ly.push_back(std::log(norm));
    mx += lx.back();
    my += ly.back();
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  return fit;
}

BiInvariantField evolve_for_norms(const RootSystemSpec& rs, const BiInvariantField& f, double t) {
  const RadialGrid& grid = f.grid;
  const double crossover = grid.half_width() * grid.half_width() / (std::numbers::pi * grid.points_per_axis());
  if (t >= crossover) return group_propagate_closed_form(rs, f, t, GridMode::Scaled).field;
  return group_propagate_multiplier(rs, f, t).field;
}

std::vector<StrichartzLevel> strichartz_norm(const RootSystemSpec& rs, const BiInvariantField& f, double T,
                                             int refinements, double q) {
  if (!(T > 0.0)) fail(ErrorCode::InvalidTime, "strichartz_norm: T must be positive");
  if (refinements < 2) fail(ErrorCode::InvalidArgument, "strichartz_norm: need at least two refinement levels");
  const double admissible = strichartz_pair(rs.rank).q;
  if (q == 0.0) q = admissible;
  if (std::abs(q - admissible) > 1e-12) {
    std::ostringstream msg;
    msg << "strichartz_norm: q = " << q << " is not the admissible exponent " << admissible << " for rank " << rs.rank;
    fail(ErrorCode::UnsupportedExponent, msg.str());
  }
  BiInvariantField g = to_conjugated(rs, f);
  const double m = mass(g);
  std::vector<StrichartzLevel> levels;
  for (int r = 0; r < refinements; ++r) {
    StrichartzLevel level;
    level.dyadic_levels = 3 + r;
    level.nodes_per_interval = 4 + 2 * r;
    if (m == 0.0) {
      levels.push_back(level);
      continue;
    }
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(level.nodes_per_interval, x, w);
    double integral = 0.0;
    for (const auto& [a, b] : dyadic_intervals(T, level.dyadic_levels)) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * x[k];
        const BiInvariantField u = evolve_for_norms(rs, g, t);
        integral += 0.5 * (b - a) * w[k] * lq_power_sum(u.grid, u.values, q) / std::pow(m, q);
      }
    }
    level.value = std::pow(integral, 1.0 / q);
    levels.push_back(level);
  }
  return levels;
}

double strichartz_stabilization(const std::vector<StrichartzLevel>& levels) {
  if (levels.size() < 2) fail(ErrorCode::InvalidArgument, "strichartz_stabilization: need two levels");
  const double last = levels.back().value;
  const double prev = levels[levels.size() - 2].value;
  if (last == 0.0) return prev == 0.0 ? 0.0 : kInfinity;
  return std::abs(last - prev) / last;
}

InhomogeneousCheck strichartz_inhomogeneous_check(const RootSystemSpec& rs, const BiInvariantField& f,
                                                  const Forcing& psi, double T, int time_nodes, int duhamel_steps) {
  if (!(T > 0.0)) fail(ErrorCode::InvalidTime, "strichartz_inhomogeneous_check: T must be positive");
  const auto [p, q] = strichartz_pair(rs.rank);
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(time_nodes, x, w);
  InhomogeneousCheck check;
  check.data_norm = mass(to_conjugated(rs, f));
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = 0.5 * T * (1.0 + x[k]);
    const double weight = 0.5 * T * w[k];
    const auto u = duhamel_solve(rs, f, psi, t, duhamel_steps);
    lhs += weight * lq_power_sum(u.field.grid, u.field.values, q);
    const BiInvariantField source = to_conjugated(rs, psi(t));
    rhs += weight * lq_power_sum(source.grid, source.values, p);
  }
  check.lhs = std::pow(lhs, 1.0 / q);
  check.forcing_norm = std::pow(rhs, 1.0 / p);
  const double denom = check.data_norm + check.forcing_norm;
  check.ratio = denom == 0.0 ? 0.0 : check.lhs / denom;
  return check;
}

}  // namespace lsg
