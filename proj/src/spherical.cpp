#include "lsg/spherical.hpp"

#include "lsg/error.hpp"
#include "lsg/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

namespace lsg {
namespace {

constexpr double kWallRatio = 1e-8;
constexpr double kTailLimit = 1e-12;
constexpr double kSingularRelative = 1e-12;

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void require_grid(const RootSystemSpec& rs, const RadialGrid& grid, const char* what) {
  if (grid.rank() != rs.rank) {
    fail(ErrorCode::DimensionError, std::string(what) + ": grid rank " + std::to_string(grid.rank()) +
                                        " does not match root-system rank " + std::to_string(rs.rank));
  }
  if (grid.rank() > 2) {
    fail(ErrorCode::DimensionError, std::string(what) + ": grid-based transforms support rank <= 2");
  }
}

// Number of positive roots orthogonal to v (to the singular tolerance).
int vanishing_roots(const RootSystemSpec& rs, const Eigen::VectorXd& v) {
  const double scale = std::max(1.0, v.norm());
  int k = 0;
  for (const auto& a : rs.positive_roots) {
    if (std::abs(v.dot(a)) <= kSingularRelative * scale * a.norm()) ++k;
  }
  return k;
}

// Step used for symmetric limits across walls: balances O(d^2) truncation with
// the eps / d^k cancellation of a k-fold zero.
double limit_step(int k) {
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2));
}

Eigen::VectorXd rho_direction(const RootSystemSpec& rs) { return rs.rho / rs.rho.norm(); }

// Flattened Weyl images s^T y of every node y, paired with weights det(s) * value.
void weyl_unfold(const RootSystemSpec& rs, const RadialGrid& grid, std::span<const cplx> values, double scale,
                 bool transpose, std::vector<double>& vectors, std::vector<cplx>& weights) {
  const int l = grid.rank();
  const std::size_t count = grid.node_count();
  const std::size_t order = rs.weyl_group.size();
  vectors.assign(order * count * static_cast<std::size_t>(l), 0.0);
  weights.assign(order * count, cplx(0.0, 0.0));
  Eigen::VectorXd y(l);
  std::size_t j = 0;
  for (const auto& w : rs.weyl_group) {
    const Eigen::MatrixXd m = transpose ? Eigen::MatrixXd(w.matrix.transpose()) : w.matrix;
    for (std::size_t i = 0; i < count; ++i, ++j) {
      grid.node(i, std::span<double>(y.data(), static_cast<std::size_t>(l)));
      const Eigen::VectorXd image = m * y;
      for (int a = 0; a < l; ++a) vectors[j * static_cast<std::size_t>(l) + static_cast<std::size_t>(a)] = image(a);
      weights[j] = w.sign * scale * values[i];
    }
  }
}

std::vector<bool> wall_mask(const RootSystemSpec& rs, const RadialGrid& grid) {
  std::vector<bool> mask(grid.node_count());
  std::vector<double> h(static_cast<std::size_t>(grid.rank()));
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, h);
    mask[i] = is_wall(rs, h);
  }
  return mask;
}

std::vector<cplx> conjugated_values(const RootSystemSpec& rs, const BiInvariantField& f) {
  if (f.representation == Representation::Conjugated) return f.values;
  return to_conjugated(rs, f).values;
}

// c(-lambda) * sum_s det(s) G(s lambda) at arbitrary points, G given by plane waves.
std::vector<cplx> transform_at(const RootSystemSpec& rs, std::span<const double> points,
                               std::span<const double> vectors, std::span<const cplx> weights) {
  const int l = rs.rank;
  const std::vector<cplx> sums = plane_wave_sum_at(l, points, vectors, weights, -1);
  std::vector<cplx> out(sums.size());
  for (std::size_t p = 0; p < sums.size(); ++p) {
    Eigen::VectorXd lam(l);
    for (int a = 0; a < l; ++a) lam(a) = -points[p * static_cast<std::size_t>(l) + static_cast<std::size_t>(a)];
    out[p] = c_function(rs, SpectralVector{lam}) * sums[p];
  }
  return out;
}

// Fills singular spectral nodes of `out` by the symmetric limit along rho.
void fill_singular_spectral(const RootSystemSpec& rs, const RadialGrid& spectral_grid, std::span<const double> vectors,
                            std::span<const cplx> weights, std::vector<cplx>& out) {
  const int l = rs.rank;
  const Eigen::VectorXd dir = rho_direction(rs);
  for (std::size_t i = 0; i < spectral_grid.node_count(); ++i) {
    const Eigen::VectorXd lam = spectral_grid.node(i);
    const int k = vanishing_roots(rs, lam);
    if (k == 0) continue;
    const double d = limit_step(k) * std::max(1.0, lam.norm());
    std::vector<double> pts(2 * static_cast<std::size_t>(l));
    for (int a = 0; a < l; ++a) {
      pts[static_cast<std::size_t>(a)] = lam(a) + d * dir(a);
      pts[static_cast<std::size_t>(l + a)] = lam(a) - d * dir(a);
    }
    const auto v = transform_at(rs, pts, vectors, weights);
    out[i] = 0.5 * (v[0] + v[1]);
  }
}

void check_tail(const RadialGrid& grid, std::span<const cplx> values, const char* what) {
  const double tail = boundary_tail(grid, values);
  if (tail > kTailLimit) {
    std::ostringstream msg;
    msg << what << ": boundary tail " << tail << " exceeds " << kTailLimit << "; enlarge the grid";
    fail(ErrorCode::GridTooSmall, msg.str());
  }
}

// Synthesis weights v(lambda) = C f^(lambda) pi(-i lambda) / pi(rho) dlambda, zero at singular lambda.
std::vector<cplx> synthesis_weights(const RootSystemSpec& rs, const SpectralField& transform, double constant) {
  const RadialGrid& sg = transform.grid;
  const double pr = pi_polynomial(rs, rs.rho);
  const auto k = static_cast<int>(rs.positive_roots.size());
  const cplx minus_i_pow = std::pow(cplx(0.0, -1.0), k);
  std::vector<cplx> v(sg.node_count());
  for (std::size_t i = 0; i < sg.node_count(); ++i) {
    const Eigen::VectorXd lam = sg.node(i);
    if (is_singular_spectral(rs, lam)) {
      v[i] = 0.0;
      continue;
    }
    v[i] = constant * transform.values[i] * minus_i_pow * pi_polynomial(rs, lam) / pr * sg.cell_volume();
  }
  return v;
}

struct CalibrationKey {
  std::string name;
  double normalization;
  auto operator<=>(const CalibrationKey&) const = default;
};

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CalibrationKey, double>& plancherel_cache() {
  static std::map<CalibrationKey, double> cache;
  return cache;
}

}  // namespace

WeylDenominator::WeylDenominator(const RootSystemSpec& rs) : rank_(rs.rank) {
  for (const auto& w : rs.weyl_group) {
    const Eigen::VectorXd image = w.matrix * rs.rho;
    for (int a = 0; a < rank_; ++a) orbit_.push_back(image(a));
    signs_.push_back(w.sign);
  }
}

double WeylDenominator::operator()(std::span<const double> h) const {
  if (h.size() != static_cast<std::size_t>(rank_)) fail(ErrorCode::DimensionError, "weyl_denominator: dimension mismatch");
  double total = 0.0;
  for (std::size_t s = 0; s < signs_.size(); ++s) {
    double e = 0.0;
    for (int a = 0; a < rank_; ++a) e += orbit_[s * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(a)] * h[static_cast<std::size_t>(a)];
    total += signs_[s] * std::exp(e);
  }
  return total;
}

double weyl_denominator(const RootSystemSpec& rs, const CartanVector& h) {
  return WeylDenominator(rs)(as_span(h.coords));
}

double density(const RootSystemSpec& rs, const CartanVector& h) {
  const double p = weyl_denominator(rs, h);
  return p * p;
}

double pi_polynomial(const RootSystemSpec& rs, const Eigen::VectorXd& mu) {
  if (mu.size() != rs.rank) fail(ErrorCode::DimensionError, "pi_polynomial: dimension mismatch");
  double p = 1.0;
  for (const auto& a : rs.positive_roots) p *= mu.dot(a);
  return p;
}

bool is_singular_spectral(const RootSystemSpec& rs, const Eigen::VectorXd& lambda) {
  return vanishing_roots(rs, lambda) > 0;
}

cplx c_function(const RootSystemSpec& rs, const SpectralVector& lambda) {
  if (lambda.coords.size() != rs.rank) fail(ErrorCode::DimensionError, "c_function: dimension mismatch");
  if (is_singular_spectral(rs, lambda.coords)) {
    fail(ErrorCode::SingularSpectralParameter, "c_function: lambda is orthogonal to a root");
  }
  const auto k = static_cast<int>(rs.positive_roots.size());
  return pi_polynomial(rs, rs.rho) / (std::pow(cplx(0.0, 1.0), k) * pi_polynomial(rs, lambda.coords));
}

bool is_wall(const RootSystemSpec& rs, std::span<const double> h) {
  // |phi| / prod 2 cosh(alpha/2) = prod |tanh(alpha/2)|, free of cancellation.
  double ratio = 1.0;
  for (const auto& a : rs.positive_roots) {
    double x = 0.0;
    for (int i = 0; i < rs.rank; ++i) x += a(i) * h[static_cast<std::size_t>(i)];
    ratio *= std::abs(std::tanh(0.5 * x));
  }
  return ratio < kWallRatio;
}

double distance_to_walls(const RootSystemSpec& rs, std::span<const double> h) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : rs.positive_roots) {
    double x = 0.0;
    for (int i = 0; i < rs.rank; ++i) x += a(i) * h[static_cast<std::size_t>(i)];
    best = std::min(best, std::abs(x) / a.norm());
  }
  return best;
}

cplx spherical_function(const RootSystemSpec& rs, const SpectralVector& lambda, const CartanVector& h) {
  if (h.coords.size() != rs.rank) fail(ErrorCode::DimensionError, "spherical_function: dimension mismatch");
  const cplx c = c_function(rs, lambda);
  if (h.coords.isZero(0.0)) return 1.0;
  if (is_wall(rs, as_span(h.coords))) {
    fail(ErrorCode::ChamberWallEvaluation, "spherical_function: H lies on a chamber wall");
  }
  cplx sum(0.0, 0.0);
  for (const auto& w : rs.weyl_group) {
    const double phase = (w.matrix * lambda.coords).dot(h.coords);
    sum += w.sign * cplx(std::cos(phase), std::sin(phase));
  }
  return c * sum / weyl_denominator(rs, h);
}

std::vector<double> weyl_denominator_on(const RootSystemSpec& rs, const RadialGrid& grid) {
  if (grid.rank() != rs.rank) fail(ErrorCode::DimensionError, "weyl_denominator_on: rank mismatch");
  const WeylDenominator phi(rs);
  std::vector<double> out(grid.node_count());
  std::vector<double> h(static_cast<std::size_t>(grid.rank()));
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node(i, h);
    out[i] = phi(h);
  }
  return out;
}

BiInvariantField to_conjugated(const RootSystemSpec& rs, const BiInvariantField& field) {
  if (field.representation == Representation::Conjugated) return field;
  const auto phi = weyl_denominator_on(rs, field.grid);
  const auto walls = wall_mask(rs, field.grid);
  BiInvariantField out{field.grid, std::vector<cplx>(field.values.size()), Representation::Conjugated};
  for (std::size_t i = 0; i < phi.size(); ++i) out.values[i] = walls[i] ? cplx(0.0, 0.0) : field.values[i] * phi[i];
  return out;
}

BiInvariantField to_plain(const RootSystemSpec& rs, const BiInvariantField& field) {
  if (field.representation == Representation::Plain) return field;
  const auto phi = weyl_denominator_on(rs, field.grid);
  const auto walls = wall_mask(rs, field.grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BiInvariantField out{field.grid, std::vector<cplx>(field.values.size()), Representation::Plain};
  for (std::size_t i = 0; i < phi.size(); ++i) out.values[i] = walls[i] ? cplx(nan, nan) : field.values[i] / phi[i];
  return out;
}

SpectralField spherical_transform(const RootSystemSpec& rs, const BiInvariantField& f, const RadialGrid& spectral_grid) {
  require_grid(rs, f.grid, "spherical_transform");
  require_grid(rs, spectral_grid, "spherical_transform");
  const std::vector<cplx> g = conjugated_values(rs, f);
  check_tail(f.grid, g, "spherical_transform");

  std::vector<double> vectors;
  std::vector<cplx> weights;
  weyl_unfold(rs, f.grid, g, f.grid.cell_volume(), true, vectors, weights);
  SpectralField out{spectral_grid, plane_wave_sum(spectral_grid, vectors, weights, -1)};
  for (std::size_t i = 0; i < spectral_grid.node_count(); ++i) {
    const Eigen::VectorXd lam = spectral_grid.node(i);
    if (is_singular_spectral(rs, lam)) continue;
    out.values[i] *= c_function(rs, SpectralVector{-lam});
  }
  fill_singular_spectral(rs, spectral_grid, vectors, weights, out.values);
  return out;
}

SpectralField spherical_transform_reduced(const RootSystemSpec& rs, const BiInvariantField& f,
                                          const RadialGrid& spectral_grid) {
  require_grid(rs, f.grid, "spherical_transform_reduced");
  require_grid(rs, spectral_grid, "spherical_transform_reduced");
  const std::vector<cplx> g = conjugated_values(rs, f);
  check_tail(f.grid, g, "spherical_transform_reduced");
  const double order = static_cast<double>(rs.weyl_group.size());

  std::vector<cplx> ghat;
  if (spectral_grid == f.grid.dual()) {
    ghat = centered_forward(f.grid, g);
  } else {
    std::vector<double> vectors(f.grid.node_count() * static_cast<std::size_t>(rs.rank));
    for (std::size_t i = 0; i < f.grid.node_count(); ++i) {
      f.grid.node(i, std::span<double>(vectors.data() + i * static_cast<std::size_t>(rs.rank),
                                       static_cast<std::size_t>(rs.rank)));
    }
    std::vector<cplx> weights(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) weights[i] = g[i] * f.grid.cell_volume();
    ghat = plane_wave_sum(spectral_grid, vectors, weights, -1);
  }

  SpectralField out{spectral_grid, std::vector<cplx>(spectral_grid.node_count())};
  bool any_singular = false;
  for (std::size_t i = 0; i < spectral_grid.node_count(); ++i) {
    const Eigen::VectorXd lam = spectral_grid.node(i);
    if (is_singular_spectral(rs, lam)) {
      any_singular = true;
      continue;
    }
    out.values[i] = c_function(rs, SpectralVector{-lam}) * order * ghat[i];
  }
  if (any_singular) {
    // Limits at singular nodes need off-lattice values of g^; use the
    // antisymmetrized sum, which equals |W| g^ up to quadrature error.
    std::vector<double> vectors;
    std::vector<cplx> weights;
    weyl_unfold(rs, f.grid, g, f.grid.cell_volume(), true, vectors, weights);
    fill_singular_spectral(rs, spectral_grid, vectors, weights, out.values);
  }
  return out;
}

namespace {

BiInvariantField synthesize_conjugated(const RootSystemSpec& rs, const SpectralField& transform,
                                       const RadialGrid& space_grid, double constant, std::vector<double>& vectors,
                                       std::vector<cplx>& weights) {
  require_grid(rs, transform.grid, "inverse_spherical_transform");
  require_grid(rs, space_grid, "inverse_spherical_transform");
  const std::vector<cplx> v = synthesis_weights(rs, transform, constant);
  check_tail(transform.grid, v, "inverse_spherical_transform");
  weyl_unfold(rs, transform.grid, v, 1.0, false, vectors, weights);
  BiInvariantField out{space_grid, plane_wave_sum(space_grid, vectors, weights, +1), Representation::Conjugated};
  const auto walls = wall_mask(rs, space_grid);
  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (walls[i]) out.values[i] = 0.0;
  }
  return out;
}

}  // namespace

BiInvariantField inverse_spherical_transform_conjugated(const RootSystemSpec& rs, const SpectralField& transform,
                                                        const RadialGrid& space_grid) {
  std::vector<double> vectors;
  std::vector<cplx> weights;
  return synthesize_conjugated(rs, transform, space_grid, plancherel_constant(rs), vectors, weights);
}

BiInvariantField inverse_spherical_transform(const RootSystemSpec& rs, const SpectralField& transform,
                                             const RadialGrid& space_grid) {
  const double constant = plancherel_constant(rs);
  std::vector<double> vectors;
  std::vector<cplx> weights;
  const BiInvariantField conj = synthesize_conjugated(rs, transform, space_grid, constant, vectors, weights);
  BiInvariantField out = to_plain(rs, conj);

  const int l = rs.rank;
  const Eigen::VectorXd dir = rho_direction(rs);
  const WeylDenominator phi(rs);
  const double pr = pi_polynomial(rs, rs.rho);
  const RadialGrid& sg = transform.grid;
  for (std::size_t i = 0; i < space_grid.node_count(); ++i) {
    if (!std::isnan(out.values[i].real())) continue;
    const Eigen::VectorXd h = space_grid.node(i);
    if (h.isZero(0.0)) {
      // u(0) = C sum f^(lambda) |c(lambda)|^-2 dlambda.
      cplx acc(0.0, 0.0);
      for (std::size_t m = 0; m < sg.node_count(); ++m) {
        const Eigen::VectorXd lam = sg.node(m);
        const double p = pi_polynomial(rs, lam) / pr;
        acc += transform.values[m] * (p * p);
      }
      out.values[i] = constant * acc * sg.cell_volume();
      continue;
    }
    int k = 0;
    for (const auto& a : rs.positive_roots) {
      if (std::abs(std::tanh(0.5 * a.dot(h))) < kWallRatio) ++k;
    }
    const double d = limit_step(std::max(k, 1)) * std::max(1.0, h.norm());
    std::vector<double> pts(2 * static_cast<std::size_t>(l));
    for (int a = 0; a < l; ++a) {
      pts[static_cast<std::size_t>(a)] = h(a) + d * dir(a);
      pts[static_cast<std::size_t>(l + a)] = h(a) - d * dir(a);
    }
    const auto v = plane_wave_sum_at(l, pts, vectors, weights, +1);
    const double p_plus = phi(std::span<const double>(pts.data(), static_cast<std::size_t>(l)));
    const double p_minus = phi(std::span<const double>(pts.data() + l, static_cast<std::size_t>(l)));
    out.values[i] = 0.5 * (v[0] / p_plus + v[1] / p_minus);
  }
  return out;
}

BiInvariantField radial_laplacian(const RootSystemSpec& rs, const BiInvariantField& f) {
  const RadialGrid& grid = f.grid;
  if (grid.rank() != rs.rank) fail(ErrorCode::DimensionError, "radial_laplacian: rank mismatch");
  if (grid.points_per_axis() < 5) fail(ErrorCode::GridTooSmall, "radial_laplacian: need at least 3 interior points per axis");
  const std::vector<cplx> w = conjugated_values(rs, f);
  const auto phi = weyl_denominator_on(rs, grid);
  const auto walls = wall_mask(rs, grid);
  const double rho2 = rs.rho.squaredNorm();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = grid.points_per_axis();

  BiInvariantField out{grid, std::vector<cplx>(grid.node_count(), cplx(nan, nan)), f.representation};
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (grid.on_boundary(i) || walls[i]) continue;
    cplx lap = -rho2 * w[i];
    std::size_t stride = 1;
    for (int a = 0; a < grid.rank(); ++a) {
      lap += (w[i + stride] - 2.0 * w[i] + w[i - stride]) * inv_h2;
      stride *= static_cast<std::size_t>(n);
    }
    out.values[i] = f.representation == Representation::Plain ? lap / phi[i] : lap;
  }
  return out;
}

double plancherel_constant_analytic(const RootSystemSpec& rs) {
  const double order = static_cast<double>(rs.weyl_group.size());
  return 1.0 / (order * order * std::pow(2.0 * std::numbers::pi, rs.rank));
}

PlancherelCalibration calibrate_plancherel(const RootSystemSpec& rs, const GaussianInit& reference,
                                           const RadialGrid& space_grid, const RadialGrid& spectral_grid) {
  const BiInvariantField f = sample_gaussian(space_grid, reference);
  const BiInvariantField g = to_conjugated(rs, f);
  const SpectralField F = spherical_transform(rs, f, spectral_grid);
  std::vector<double> vectors;
  std::vector<cplx> weights;
  const BiInvariantField r = synthesize_conjugated(rs, F, space_grid, 1.0, vectors, weights);

  cplx num(0.0, 0.0);
  double den = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    num += std::conj(r.values[i]) * g.values[i];
    den += std::norm(r.values[i]);
  }
  if (den == 0.0) fail(ErrorCode::CalibrationFailure, "calibrate_plancherel: reference synthesis vanished");
  PlancherelCalibration cal;
  cal.calibrated = num.real() / den;
  cal.analytic = plancherel_constant_analytic(rs);
  std::vector<cplx> scaled(r.values.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = cal.calibrated * r.values[i];
  cal.residual = relative_l2(scaled, g.values);
  return cal;
}

double plancherel_constant(const RootSystemSpec& rs) {
  const CalibrationKey key{rs.name, rs.normalization};
  {
    std::lock_guard lock(cache_mutex());
    const auto it = plancherel_cache().find(key);
    if (it != plancherel_cache().end()) return it->second;
  }
  if (rs.rank > 2) fail(ErrorCode::DimensionError, "plancherel_constant: grid-based calibration supports rank <= 2");
  // Reference Gaussian a = 1 with lengths scaled to the root normalization.
  const double s = 1.0 / rs.normalization;
  const RadialGrid space = rs.rank == 1 ? RadialGrid(1, 8.0 * s, 256) : RadialGrid(2, 8.0 * s, 96);
  const RadialGrid spectral(rs.rank, 12.0 / s, 64);
  const GaussianInit reference{rs.normalization * rs.normalization, 0.0, 1.0};
  const PlancherelCalibration cal = calibrate_plancherel(rs, reference, space, spectral);
  if (cal.residual > 1e-6) {
    std::ostringstream msg;
    msg << "plancherel_constant: round-trip residual " << cal.residual << " after calibration exceeds 1e-6";
    fail(ErrorCode::CalibrationFailure, msg.str());
  }
  std::lock_guard lock(cache_mutex());
  plancherel_cache()[key] = cal.calibrated;
  return cal.calibrated;
}

double relative_l2_density(const RootSystemSpec& rs, const BiInvariantField& a, const BiInvariantField& b) {
  if (!(a.grid == b.grid)) fail(ErrorCode::DimensionError, "relative_l2_density: grids differ");
  return relative_l2(conjugated_values(rs, a), conjugated_values(rs, b));
}

}  // namespace lsg
