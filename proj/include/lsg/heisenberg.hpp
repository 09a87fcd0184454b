#pragma once

#include <complex>
#include <vector>

namespace lsg::heisenberg {

using cplx = std::complex<double>;

struct Point {
  double x = 0.0;
  double u = 0.0;
  double xi = 0.0;
};

struct GeodesicParams {
  double beta = 0.0;
  double t_param = 1.0;  // nonzero; not the evolution time
  double s = 0.0;
};

/// exp(-i lambda xi) exp(-t lambda^2) (lambda / sinh(lambda t)) exp(-lambda coth(lambda t) (x^2 + u^2) / 4)
cplx heat_integrand(double lambda, double x, double u, double xi, double t);

struct HeatKernelValue {
  cplx value;
  double error_estimate = 0.0;
  double lambda_cutoff = 0.0;
  int intervals = 0;
};

/// Integral of heat_integrand over lambda, unnormalized. The range is cut where
/// exp(-t lambda^2) < tol and integrated by adaptive Gauss-Legendre bisection.
HeatKernelValue heat_kernel(double x, double u, double xi, double t, double tol, double cutoff_scale = 1.0);

/// (lambda / sin(lambda t)) exp(-(i/4) lambda cot(lambda t) (x^2 + u^2)). Throws
/// EvaluationAtSingularity within 1e-9 of k pi / t, k != 0.
cplx schrodinger_integrand(double lambda, double x, double u, double t);

inline constexpr double kSingularityGuard = 1e-9;

/// k pi / t for k = 1..k_max.
std::vector<double> singularities(double t, int k_max);

Point geodesic(const GeodesicParams& params);

/// max over s of |(x - cos b / t)^2 + (u + sin b / t)^2 - 1 / t^2|.
double projection_residual(double beta, double t_param, const std::vector<double>& s_samples);

/// k pi / t_param: where the circle projection reaches its cut point.
double cutlocus_distance(int k, double t_param);

}  // namespace lsg::heisenberg
