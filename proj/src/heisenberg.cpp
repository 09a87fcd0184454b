#include "lsg/heisenberg.hpp"

#include "lsg/error.hpp"
#include "lsg/estimates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace lsg::heisenberg {
namespace {

constexpr double kSeriesCutoff = 1e-4;
constexpr int kMaxDepth = 60;

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidTime, std::string(what) + ": t must be positive");
}

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

const Rule& rule(int n) {
  static const Rule low = [] {
    Rule r;
    gauss_legendre(10, r.x, r.w);
    return r;
  }();
  static const Rule high = [] {
    Rule r;
    gauss_legendre(20, r.x, r.w);
    return r;
  }();
  return n == 10 ? low : high;
}

template <class F>
cplx apply(const Rule& r, const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  cplx s(0.0, 0.0);
  for (std::size_t k = 0; k < r.x.size(); ++k) s += r.w[k] * f(mid + half * r.x[k]);
  return half * s;
}

template <class F>
void adaptive(const F& f, double a, double b, double tol, int depth, HeatKernelValue& acc) {
  const cplx coarse = apply(rule(10), f, a, b);
  const cplx fine = apply(rule(20), f, a, b);
  const double err = std::abs(fine - coarse);
  if (err <= tol) {
    acc.value += fine;
    acc.error_estimate += err;
    ++acc.intervals;
    return;
  }
  if (depth >= kMaxDepth) {
    std::ostringstream msg;
    msg << "heat_kernel: no convergence on [" << a << ", " << b << "] (estimate " << err << ")";
    fail(ErrorCode::QuadratureFailure, msg.str());
  }
  const double mid = 0.5 * (a + b);
  adaptive(f, a, mid, 0.5 * tol, depth + 1, acc);
  adaptive(f, mid, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace

cplx heat_integrand(double lambda, double x, double u, double xi, double t) {
  require_positive_time(t, "heat_integrand");
  const double z = lambda * t;
  double ratio;  // lambda / sinh(lambda t)
  double coth;   // lambda coth(lambda t)
  if (std::abs(z) < kSeriesCutoff) {
    ratio = (1.0 - z * z / 6.0) / t;
    coth = (1.0 + z * z / 3.0) / t;
  } else {
    ratio = lambda / std::sinh(z);
    coth = lambda / std::tanh(z);
  }
  const double r2 = x * x + u * u;
  const double modulus = std::exp(-t * lambda * lambda - 0.25 * coth * r2) * ratio;
  return modulus * cplx(std::cos(lambda * xi), -std::sin(lambda * xi));
}

HeatKernelValue heat_kernel(double x, double u, double xi, double t, double tol, double cutoff_scale) {
  require_positive_time(t, "heat_kernel");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "heat_kernel: tol must be positive");
  HeatKernelValue out;
  out.lambda_cutoff = cutoff_scale * std::sqrt(std::log(1.0 / std::min(tol, 0.5)) / t);
  const auto f = [&](double lambda) { return heat_integrand(lambda, x, u, xi, t); };
  // Split at 0 so both halves are smooth on their own scale.
  adaptive(f, -out.lambda_cutoff, 0.0, 0.5 * tol, 0, out);
  adaptive(f, 0.0, out.lambda_cutoff, 0.5 * tol, 0, out);
  return out;
}

cplx schrodinger_integrand(double lambda, double x, double u, double t) {
  require_positive_time(t, "schrodinger_integrand");
  const double k = std::round(lambda * t / std::numbers::pi);
  if (k != 0.0 && std::abs(lambda - k * std::numbers::pi / t) <= kSingularityGuard) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "schrodinger_integrand: lambda = " << lambda << " is within " << kSingularityGuard << " of the singularity "
        << k << " pi / t";
    fail(ErrorCode::EvaluationAtSingularity, msg.str());
  }
  const double z = lambda * t;
  double ratio;  // lambda / sin(lambda t)
  double cot;    // lambda cot(lambda t)
  if (std::abs(z) < kSeriesCutoff) {
    ratio = (1.0 + z * z / 6.0) / t;
    cot = (1.0 - z * z / 3.0) / t;
  } else {
    ratio = lambda / std::sin(z);
    cot = lambda / std::tan(z);
  }
  const double phase = -0.25 * cot * (x * x + u * u);
  return ratio * cplx(std::cos(phase), std::sin(phase));
}

std::vector<double> singularities(double t, int k_max) {
  require_positive_time(t, "singularities");
  if (k_max < 1) fail(ErrorCode::InvalidArgument, "singularities: k_max must be at least 1");
  std::vector<double> out;
  for (int k = 1; k <= k_max; ++k) out.push_back(cutlocus_distance(k, t));
  return out;
}

Point geodesic(const GeodesicParams& p) {
  if (p.t_param == 0.0) fail(ErrorCode::InvalidArgument, "geodesic: t_param must be nonzero");
  const double t = p.t_param;
  const double ts = t * p.s;
  const double cb = std::cos(p.beta);
  const double sb = std::sin(p.beta);
  return {(cb * (1.0 - std::cos(ts)) + sb * std::sin(ts)) / t, (-sb * (1.0 - std::cos(ts)) + cb * std::sin(ts)) / t,
          2.0 * (ts - std::sin(ts)) / (t * t)};
}

double projection_residual(double beta, double t_param, const std::vector<double>& s_samples) {
  if (t_param == 0.0) fail(ErrorCode::InvalidArgument, "projection_residual: t_param must be nonzero");
  const double cx = std::cos(beta) / t_param;
  const double cu = -std::sin(beta) / t_param;
  const double r2 = 1.0 / (t_param * t_param);
  double worst = 0.0;
  for (double s : s_samples) {
    const Point p = geodesic({beta, t_param, s});
    const double dx = p.x - cx;
    const double du = p.u - cu;
    worst = std::max(worst, std::abs(dx * dx + du * du - r2));
  }
  return worst;
}

double cutlocus_distance(int k, double t_param) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "cutlocus_distance: k must be at least 1");
  if (!(t_param > 0.0)) fail(ErrorCode::InvalidArgument, "cutlocus_distance: t_param must be positive");
  return k * std::numbers::pi / t_param;
}

}  // namespace lsg::heisenberg
