#include "lsg/propagator.hpp"

#include "lsg/error.hpp"
#include "lsg/fourier.hpp"
#include "lsg/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

namespace lsg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTailLimit = 1e-12;
constexpr double kSpectrumTailLimit = 1e-10;
constexpr double kSupportFloor = 1e-13;

cplx unit_phase(double phase) {
  const double reduced = std::fmod(phase, kTwoPi);
  return {std::cos(reduced), std::sin(reduced)};
}

double squared_norm(std::span<const double> h) {
  double r2 = 0.0;
  for (double x : h) r2 += x * x;
  return r2;
}

void require_time(double t, bool allow_zero) {
  if (!std::isfinite(t) || t < 0.0 || (!allow_zero && t == 0.0)) {
    fail(ErrorCode::InvalidTime, "propagation time must be " + std::string(allow_zero ? "nonnegative" : "positive"));
  }
}

void require_tail(const RadialGrid& grid, std::span<const cplx> values, const char* what) {
  const double tail = boundary_tail(grid, values);
  if (tail > kTailLimit) {
    std::ostringstream msg;
    msg << what << ": initial data reaches " << tail << " of its peak at the grid boundary (limit " << kTailLimit
        << ")";
    fail(ErrorCode::GridTooSmall, msg.str());
  }
}

// exp(i |H|^2 / 4t) * K * t^(-l/2) * R^(H / 2t) with R = exp(i |y|^2 / 4t) g, on
// either the scaled lattice or the input grid.
BiInvariantField chirp_fourier(const RadialGrid& grid, std::span<const cplx> g, double t, GridMode mode, cplx constant,
                               Representation rep, const char* what) {
  require_time(t, false);
  require_tail(grid, g, what);
  const int l = grid.rank();
  std::vector<double> y(static_cast<std::size_t>(l));
  std::vector<cplx> r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    grid.node(i, y);
    r[i] = g[i] * unit_phase(squared_norm(y) / (4.0 * t));
  }

  std::vector<cplx> spectrum = centered_forward(grid, r);
  const double spectral_tail = boundary_tail(grid.dual(), spectrum);
  if (spectral_tail > kSpectrumTailLimit) {
    std::ostringstream msg;
    msg << what << ": chirp exp(i|H|^2/4t) is not resolved at t = " << t << " (spectral edge " << spectral_tail
        << "); refine the grid";
    fail(ErrorCode::GridTooSmall, msg.str());
  }

  RadialGrid out_grid = grid;
  if (mode == GridMode::Scaled) {
    out_grid = scaled_grid(grid, t);
  } else {
    // Output frequencies H/2t beyond the input band fold back onto the peak as ghosts.
    const double band = grid.dual().half_width();
    if (grid.half_width() / (2.0 * t) > band * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << what << ": fixed-grid output at t = " << t << " needs frequencies up to " << grid.half_width() / (2.0 * t)
          << " but the grid band is " << band << "; use the scaled grid or refine";
      fail(ErrorCode::GridTooSmall, msg.str());
    }
    std::vector<double> vectors(grid.node_count() * static_cast<std::size_t>(l));
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      grid.node(i, std::span<double>(vectors.data() + i * static_cast<std::size_t>(l), static_cast<std::size_t>(l)));
    }
    for (double& v : vectors) v /= 2.0 * t;
    std::vector<cplx> weights(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) weights[i] = r[i] * grid.cell_volume();
    spectrum = plane_wave_sum(grid, vectors, weights, -1);
  }

  const cplx scale = constant * std::pow(t, -0.5 * l);
  BiInvariantField out{out_grid, std::vector<cplx>(out_grid.node_count()), rep};
  std::vector<double> h(static_cast<std::size_t>(l));
  for (std::size_t i = 0; i < out_grid.node_count(); ++i) {
    out_grid.node(i, h);
    out.values[i] = scale * unit_phase(squared_norm(h) / (4.0 * t)) * spectrum[i];
  }
  return out;
}

std::vector<cplx> conjugated_input(const RootSystemSpec& rs, const BiInvariantField& f) {
  if (f.grid.rank() != rs.rank) fail(ErrorCode::DimensionError, "propagator: grid rank does not match root system");
  return to_conjugated(rs, f).values;
}

std::mutex& constant_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::string, double>, cplx>& constant_cache() {
  static std::map<std::pair<std::string, double>, cplx> cache;
  return cache;
}

}  // namespace

std::string_view to_string(Method m) { return m == Method::ClosedForm ? "closed" : "spectral"; }
std::string_view to_string(GridMode m) { return m == GridMode::Scaled ? "scaled" : "fixed"; }

RadialGrid scaled_grid(const RadialGrid& input, double t) {
  require_time(t, false);
  const RadialGrid dual = input.dual();
  return RadialGrid(input.rank(), 2.0 * t * dual.half_width(), input.points_per_axis());
}

cplx fresnel_constant(int rank) { return std::pow(cplx(0.0, 4.0 * std::numbers::pi), -0.5 * rank); }

cplx euclidean_gaussian_solution(const GaussianInit& init, int dim, double r2, double t) {
  const cplx z(init.rate, init.chirp);
  const cplx d = 1.0 + cplx(0.0, 4.0 * t) * z;
  return init.amplitude * std::pow(d, -0.5 * dim) * std::exp(-z * r2 / d);
}

PropagationResult euclidean_propagate(const RadialGrid& grid, std::span<const cplx> f, double t, GridMode mode) {
  if (f.size() != grid.node_count()) fail(ErrorCode::DimensionError, "euclidean_propagate: sample count mismatch");
  BiInvariantField field =
      chirp_fourier(grid, f, t, mode, fresnel_constant(grid.rank()), Representation::Plain, "euclidean_propagate");
  return {std::move(field), t, Method::ClosedForm, mode};
}

PropagationResult group_propagate_closed_form_with(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                                                   GridMode mode, cplx constant) {
  const std::vector<cplx> g = conjugated_input(rs, f);
  BiInvariantField field =
      chirp_fourier(f.grid, g, t, mode, constant, Representation::Conjugated, "group_propagate_closed_form");
  const cplx outer = unit_phase(-t * rs.rho.squaredNorm());
  for (auto& v : field.values) v *= outer;
  return {std::move(field), t, Method::ClosedForm, mode};
}

PropagationResult group_propagate_closed_form(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                                              GridMode mode) {
  return group_propagate_closed_form_with(rs, f, t, mode, propagator_constant(rs));
}

RadialGrid auto_spectral_grid(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                              const RadialGrid& output_grid) {
  require_time(t, true);
  const std::vector<cplx> g = conjugated_input(rs, f);
  const std::vector<cplx> ghat = centered_forward(f.grid, g);
  const RadialGrid dual = f.grid.dual();
  const double gpeak = max_abs(g);
  const double hpeak = max_abs(ghat);
  double support = 0.0;
  double band = 0.0;
  std::vector<double> h(static_cast<std::size_t>(rs.rank));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g[i]) > kSupportFloor * gpeak) {
      f.grid.node(i, h);
      support = std::max(support, std::sqrt(squared_norm(h)));
    }
    if (std::abs(ghat[i]) > kSupportFloor * hpeak) {
      dual.node(i, h);
      band = std::max(band, std::sqrt(squared_norm(h)));
    }
  }
  band = std::max(band, dual.spacing());
  const double reach = output_grid.half_width() * std::sqrt(static_cast<double>(rs.rank));
  double spacing = 0.9 * kTwoPi / (reach + support + 2.0 * t * band);
  if (t > 0.0) spacing = std::min(spacing, std::numbers::pi / (4.0 * t * band));
  const double half_width = 1.05 * band;
  int n = 2 * static_cast<int>(std::ceil(half_width / spacing));
  n = std::max(n, 16);
  return RadialGrid(rs.rank, half_width, n);
}

PropagationResult group_propagate_spectral(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                                           std::optional<RadialGrid> spectral_grid,
                                           std::optional<RadialGrid> output_grid) {
  require_time(t, true);
  const RadialGrid out = output_grid.value_or(f.grid);
  const RadialGrid sg = spectral_grid.value_or(auto_spectral_grid(rs, f, t, out));
  SpectralField F = spherical_transform(rs, f, sg);

  double weight_peak = 0.0;
  std::vector<double> weight(sg.node_count());
  for (std::size_t i = 0; i < sg.node_count(); ++i) {
    weight[i] = std::abs(F.values[i] * pi_polynomial(rs, sg.node(i)));
    weight_peak = std::max(weight_peak, weight[i]);
  }
  double lambda_max = 0.0;
  for (std::size_t i = 0; i < sg.node_count(); ++i) {
    if (weight[i] > kTailLimit * weight_peak) lambda_max = std::max(lambda_max, sg.node(i).norm());
  }
  if (t > 0.0 && lambda_max > 0.0 && sg.spacing() > std::numbers::pi / (4.0 * t * lambda_max)) {
    std::ostringstream msg;
    msg << "group_propagate_spectral: spectral spacing " << sg.spacing() << " exceeds pi/(4 t lambda_max) = "
        << std::numbers::pi / (4.0 * t * lambda_max);
    fail(ErrorCode::UnderResolvedPhase, msg.str());
  }

  const double rho2 = rs.rho.squaredNorm();
  for (std::size_t i = 0; i < sg.node_count(); ++i) {
    F.values[i] *= unit_phase(-t * (sg.node(i).squaredNorm() + rho2));
  }
  return {inverse_spherical_transform_conjugated(rs, F, out), t, Method::Spectral, GridMode::Fixed};
}

PropagationResult group_propagate_multiplier(const RootSystemSpec& rs, const BiInvariantField& f, double t) {
  require_time(t, true);
  const std::vector<cplx> g = conjugated_input(rs, f);
  BiInvariantField field{f.grid, g, Representation::Conjugated};
  if (t > 0.0) {
    std::vector<cplx> spectrum = centered_forward(f.grid, g);
    const RadialGrid dual = f.grid.dual();
    const double rho2 = rs.rho.squaredNorm();
    std::vector<double> xi(static_cast<std::size_t>(rs.rank));
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      dual.node(i, xi);
      spectrum[i] *= unit_phase(-t * (squared_norm(xi) + rho2));
    }
    field.values = centered_inverse(f.grid, spectrum);
  }
  return {std::move(field), t, Method::Spectral, GridMode::Fixed};
}

ConstantCalibration calibrate_constant(const RootSystemSpec& rs, const BiInvariantField& reference, double t) {
  const auto unit = group_propagate_closed_form_with(rs, reference, t, GridMode::Fixed, 1.0);
  const auto oracle = group_propagate_spectral(rs, reference, t);
  const auto& a = unit.field.values;
  const auto& b = oracle.field.values;
  cplx num(0.0, 0.0);
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::conj(a[i]) * b[i];
    den += std::norm(a[i]);
  }
  if (den == 0.0) fail(ErrorCode::CalibrationFailure, "calibrate_constant: reference evolution vanished");
  ConstantCalibration cal;
  cal.calibrated = num / den;
  cal.analytic = fresnel_constant(rs.rank);
  std::vector<cplx> fitted(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) fitted[i] = cal.calibrated * a[i];
  cal.residual = relative_l2(fitted, b);
  if (cal.residual > 1e-6) {
    std::ostringstream msg;
    msg << "calibrate_constant: closed form and spectral oracle differ by " << cal.residual
        << " after the best constant";
    fail(ErrorCode::CalibrationFailure, msg.str());
  }
  return cal;
}

cplx propagator_constant(const RootSystemSpec& rs) {
  const std::pair<std::string, double> key{rs.name, rs.normalization};
  {
    std::lock_guard lock(constant_mutex());
    const auto it = constant_cache().find(key);
    if (it != constant_cache().end()) return it->second;
  }
  if (rs.rank > 2) fail(ErrorCode::DimensionError, "propagator_constant: grid-based calibration supports rank <= 2");
  const double s = 1.0 / rs.normalization;
  const RadialGrid grid = rs.rank == 1 ? RadialGrid(1, 8.0 * s, 512) : RadialGrid(2, 8.0 * s, 128);
  const double t = (rs.rank == 1 ? 0.5 : 0.25) * s * s;
  const GaussianInit reference{rs.normalization * rs.normalization, 0.0, 1.0};
  const cplx k = calibrate_constant(rs, sample_gaussian(grid, reference), t).calibrated;
  std::lock_guard lock(constant_mutex());
  constant_cache()[key] = k;
  return k;
}

PropagationResult duhamel_solve(const RootSystemSpec& rs, const BiInvariantField& f, const Forcing& psi, double t,
                                int steps) {
  require_time(t, false);
  if (steps < 8 || steps % 2 != 0) fail(ErrorCode::InvalidArgument, "duhamel_solve: steps must be even and >= 8");
  // The closed form needs the chirp exp(i|H|^2/4t) resolved on the grid; at
  // short times the periodic multiplier is used instead.
  PropagationResult result;
  try {
    result = group_propagate_closed_form(rs, f, t, GridMode::Fixed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::GridTooSmall) throw;
    const std::vector<cplx> g = conjugated_input(rs, f);
    require_tail(f.grid, g, "duhamel_solve");
    result = group_propagate_multiplier(rs, f, t);
    result.method = Method::ClosedForm;
  }
  const double ds = t / steps;
  std::vector<cplx> integral(f.grid.node_count(), cplx(0.0, 0.0));
  for (int j = 0; j <= steps; ++j) {
    const double s = j * ds;
    const BiInvariantField forcing = psi(s);
    if (!(forcing.grid == f.grid)) fail(ErrorCode::DimensionError, "duhamel_solve: forcing grid differs from data grid");
    BiInvariantField source = to_conjugated(rs, forcing);
    const double defect = weyl_symmetry_defect(rs, source.grid, source.values, true);
    if (defect > 1e-8) {
      std::ostringstream msg;
      msg << "duhamel_solve: psi * phi deviates from Weyl antisymmetry by " << defect << " at s = " << s;
      fail(ErrorCode::ForcingNotAntisymmetrizable, msg.str());
    }
    for (auto& v : source.values) v *= cplx(0.0, 1.0);
    const double w = (j == 0 || j == steps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    const auto evolved = group_propagate_multiplier(rs, source, t - s);
    for (std::size_t i = 0; i < integral.size(); ++i) integral[i] += (w * ds / 3.0) * evolved.field.values[i];
  }
  for (std::size_t i = 0; i < integral.size(); ++i) result.field.values[i] += integral[i];
  return result;
}

BiInvariantField plain_profile(const RootSystemSpec& rs, const PropagationResult& result) {
  return to_plain(rs, result.field);
}

double mass(const BiInvariantField& conjugated) { return l2_norm(conjugated.grid, conjugated.values); }

}  // namespace lsg
