#include "lsg/hardy.hpp"

#include "lsg/error.hpp"
#include "lsg/propagator.hpp"
#include "lsg/spherical.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace lsg {
namespace {

// Below this fraction of the initial peak the evolved field is treated as zero.
constexpr double kNoiseFloor = 1e-13;

std::string statement_for(Classification c) {
  switch (c) {
    case Classification::MustVanish:
      return "uniqueness hypotheses numerically satisfied (evidence, not proof): the solution must vanish";
    case Classification::Critical:
      return "product at the sharp threshold 16abt0^2 = 1: nonzero solutions exist at equality";
    case Classification::Inconclusive:
      return "product below threshold: nonzero solutions are permitted";
  }
  return {};
}

UniquenessReport finish(const RadialGrid& grid_f, std::span<const cplx> f, const RadialGrid& grid_u,
                        std::span<const cplx> u, double t0, double tol_crit) {
  UniquenessReport report;
  report.verdict.t0 = t0;
  const double peak_f = max_abs(f);
  report.sup_norm = max_abs(u);
  if (peak_f == 0.0 || report.sup_norm <= kNoiseFloor * peak_f) {
    report.degenerate = true;
    report.statement = "DEGENERATE: field below the noise floor, no envelope can be fitted";
    return report;
  }
  report.fit_f = fit_envelope(grid_f, f);
  report.fit_u = fit_envelope(grid_u, u);
  report.verdict = hardy_product(report.fit_f.envelope, report.fit_u.envelope, t0, tol_crit);
  report.statement = statement_for(report.verdict.classification);
  return report;
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::MustVanish: return "MUST_VANISH";
    case Classification::Critical: return "CRITICAL";
    case Classification::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

EnvelopeFit fit_envelope(const RadialGrid& grid, std::span<const cplx> values, double floor, double cap) {
  if (values.size() != grid.node_count()) fail(ErrorCode::DimensionError, "fit_envelope: sample count mismatch");
  if (!(floor > 0.0) || !(cap > floor)) fail(ErrorCode::InvalidArgument, "fit_envelope: need 0 < floor < cap");
  double peak = 0.0;
  for (const auto& v : values) {
    if (std::isfinite(v.real()) && std::isfinite(v.imag())) peak = std::max(peak, std::abs(v));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> h(static_cast<std::size_t>(grid.rank()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double m = std::abs(values[i]);
    if (!std::isfinite(m) || m < floor * peak || m > cap * peak || m == 0.0) continue;
    grid.node(i, h);
    double r2 = 0.0;
    for (double x : h) r2 += x * x;
    xs.push_back(r2);
    ys.push_back(std::log(m));
  }
  if (xs.size() < kMinFitSamples) {
    std::ostringstream msg;
    msg << "fit_envelope: " << xs.size() << " nodes in the fit annulus, need " << kMinFitSamples;
    fail(ErrorCode::InsufficientDecaySamples, msg.str());
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::InsufficientDecaySamples, "fit_envelope: annulus nodes share one radius");
  const double slope = sxy / sxx;
  const double rate = -slope;
  if (!(rate > 0.0)) fail(ErrorCode::NotGaussianDecay, "fit_envelope: fitted rate is not positive");
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  EnvelopeFit fit;
  fit.envelope = {std::exp(intercept), rate};
  fit.residual = std::sqrt(ss / n);
  fit.samples = xs.size();
  fit.gaussian_like = fit.residual <= kGaussianResidualLimit;
  return fit;
}

Classification classify(double product, double tol_crit) {
  if (product > 1.0 + tol_crit) return Classification::MustVanish;
  if (std::abs(product - 1.0) <= tol_crit) return Classification::Critical;
  return Classification::Inconclusive;
}

HardyVerdict hardy_product(const GaussianEnvelope& env_f, const GaussianEnvelope& env_u, double t0, double tol_crit) {
  if (!(t0 > 0.0)) fail(ErrorCode::InvalidTime, "hardy_product: t0 must be positive");
  const double product = 16.0 * env_f.rate * env_u.rate * t0 * t0;
  return {product, classify(product, tol_crit), t0};
}

HardyVerdict classical_hardy_check(const GaussianEnvelope& env_f, const GaussianEnvelope& env_fourier,
                                   double tol_crit) {
  const double product = 4.0 * env_f.rate * env_fourier.rate;
  return {product, classify(product, tol_crit), 0.0};
}

UniquenessReport uniqueness_experiment_euclidean(const RadialGrid& grid, std::span<const cplx> f, double t0,
                                                 double tol_crit) {
  if (!(t0 > 0.0)) fail(ErrorCode::InvalidTime, "uniqueness_experiment: t0 must be positive");
  if (max_abs(f) == 0.0) return finish(grid, f, grid, f, t0, tol_crit);
  const PropagationResult u = euclidean_propagate(grid, f, t0, GridMode::Scaled);
  return finish(grid, f, u.field.grid, u.field.values, t0, tol_crit);
}

UniquenessReport uniqueness_experiment(const RootSystemSpec& rs, const BiInvariantField& f, double t0,
                                       double tol_crit) {
  if (!(t0 > 0.0)) fail(ErrorCode::InvalidTime, "uniqueness_experiment: t0 must be positive");
  const BiInvariantField g = to_conjugated(rs, f);
  if (max_abs(g.values) == 0.0) return finish(g.grid, g.values, g.grid, g.values, t0, tol_crit);
  const PropagationResult u = group_propagate_closed_form(rs, f, t0, GridMode::Scaled);
  return finish(g.grid, g.values, u.field.grid, u.field.values, t0, tol_crit);
}

}  // namespace lsg
