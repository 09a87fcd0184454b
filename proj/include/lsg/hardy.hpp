#pragma once

#include "lsg/grid.hpp"
#include "lsg/root_system.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lsg {

/// |f(H)| <= amplitude * exp(-rate |H|^2)
struct GaussianEnvelope {
  double amplitude = 1.0;
  double rate = 1.0;
};

struct EnvelopeFit {
  GaussianEnvelope envelope;
  double residual = 0.0;  // RMS of the log-linear fit, natural-log units
  std::size_t samples = 0;
  bool gaussian_like = true;  // residual within kGaussianResidualLimit
};

inline constexpr double kDefaultFitFloor = 1e-10;
inline constexpr double kDefaultFitCap = 1e-2;
inline constexpr std::size_t kMinFitSamples = 16;
inline constexpr double kGaussianResidualLimit = 0.25;
inline constexpr double kDefaultTolCrit = 0.02;

/// Least-squares fit of log|v| = log A - a |H|^2 over nodes with
/// |v| in [floor, cap] * peak. NaN samples are ignored.
EnvelopeFit fit_envelope(const RadialGrid& grid, std::span<const cplx> values, double floor = kDefaultFitFloor,
                         double cap = kDefaultFitCap);

enum class Classification { MustVanish, Critical, Inconclusive };

std::string_view to_string(Classification c);

struct HardyVerdict {
  double product = 0.0;
  Classification classification = Classification::Inconclusive;
  double t0 = 0.0;
};

Classification classify(double product, double tol_crit = kDefaultTolCrit);

/// 16 a b t0^2 with the three-way classification.
HardyVerdict hardy_product(const GaussianEnvelope& env_f, const GaussianEnvelope& env_u, double t0,
                           double tol_crit = kDefaultTolCrit);

/// 4 a b for a function and its Fourier transform.
HardyVerdict classical_hardy_check(const GaussianEnvelope& env_f, const GaussianEnvelope& env_fourier,
                                   double tol_crit = kDefaultTolCrit);

struct UniquenessReport {
  bool degenerate = false;
  HardyVerdict verdict;
  EnvelopeFit fit_f;
  EnvelopeFit fit_u;
  double sup_norm = 0.0;  // max |u(t0)| (conjugated profile on groups)
  std::string statement;
};

/// Propagates f to t0 in R^n (scaled grid) and compares both envelopes.
UniquenessReport uniqueness_experiment_euclidean(const RadialGrid& grid, std::span<const cplx> f, double t0,
                                                 double tol_crit = kDefaultTolCrit);

/// Group version: envelopes are fitted on the conjugated profiles f * phi and
/// u * phi, whose Gaussian rates equal those of f and u.
UniquenessReport uniqueness_experiment(const RootSystemSpec& rs, const BiInvariantField& f, double t0,
                                       double tol_crit = kDefaultTolCrit);

}  // namespace lsg
