#pragma once

#include "lsg/grid.hpp"
#include "lsg/root_system.hpp"

#include <span>
#include <vector>

namespace lsg {

/// Fast evaluation of phi(H) = sum_s det(s) exp(<s rho, H>) at many points.
class WeylDenominator {
 public:
  explicit WeylDenominator(const RootSystemSpec& rs);

  double operator()(std::span<const double> h) const;
  int rank() const { return rank_; }

 private:
  int rank_;
  std::vector<double> orbit_;  // |W| rows of s * rho
  std::vector<double> signs_;
};

double weyl_denominator(const RootSystemSpec& rs, const CartanVector& h);

/// Radial Haar density phi(H)^2.
double density(const RootSystemSpec& rs, const CartanVector& h);

/// prod over positive roots of <mu, alpha>.
double pi_polynomial(const RootSystemSpec& rs, const Eigen::VectorXd& mu);

/// c(lambda) = pi(rho) / pi(i lambda); throws SingularSpectralParameter when
/// lambda is orthogonal to a root.
cplx c_function(const RootSystemSpec& rs, const SpectralVector& lambda);

bool is_singular_spectral(const RootSystemSpec& rs, const Eigen::VectorXd& lambda);

/// Chamber-wall test: |phi(H)| < 1e-8 * prod_alpha 2 cosh(alpha(H) / 2).
bool is_wall(const RootSystemSpec& rs, std::span<const double> h);

/// Euclidean distance from H to the nearest chamber wall.
double distance_to_walls(const RootSystemSpec& rs, std::span<const double> h);

/// Elementary spherical function phi_lambda(H). phi_lambda(0) = 1 via the limit
/// branch; other wall points throw ChamberWallEvaluation.
cplx spherical_function(const RootSystemSpec& rs, const SpectralVector& lambda, const CartanVector& h);

/// phi sampled on every node of the grid.
std::vector<double> weyl_denominator_on(const RootSystemSpec& rs, const RadialGrid& grid);

BiInvariantField to_conjugated(const RootSystemSpec& rs, const BiInvariantField& field);

/// Divides by phi on regular nodes; wall nodes become NaN.
BiInvariantField to_plain(const RootSystemSpec& rs, const BiInvariantField& field);

/// Spherical transform by trapezoidal quadrature of
///   f^(lambda) = integral phi_{-lambda}(H) f(H) phi(H)^2 dH
/// over the full box. Accepts Plain or Conjugated input.
SpectralField spherical_transform(const RootSystemSpec& rs, const BiInvariantField& f, const RadialGrid& spectral_grid);

/// Same transform through the Euclidean Fourier transform of f * phi:
///   f^(lambda) = c(-lambda) |W| (f phi)^(lambda).
SpectralField spherical_transform_reduced(const RootSystemSpec& rs, const BiInvariantField& f,
                                          const RadialGrid& spectral_grid);

/// Spectral synthesis returning the conjugated profile u * phi.
BiInvariantField inverse_spherical_transform_conjugated(const RootSystemSpec& rs, const SpectralField& transform,
                                                        const RadialGrid& space_grid);

/// Spectral synthesis returning u itself; wall nodes are filled by their limits.
BiInvariantField inverse_spherical_transform(const RootSystemSpec& rs, const SpectralField& transform,
                                             const RadialGrid& space_grid);

/// Radial Laplace-Beltrami operator phi^-1 (Delta_euclid - |rho|^2)(phi f) by
/// centred second differences. Non-interior and wall nodes are NaN.
BiInvariantField radial_laplacian(const RootSystemSpec& rs, const BiInvariantField& f);

struct PlancherelCalibration {
  double calibrated = 0.0;
  double analytic = 0.0;  // 1 / (|W|^2 (2 pi)^rank)
  double residual = 0.0;  // relative L2(phi^2 dH) round-trip error after calibration
};

/// Round-trip calibration of the synthesis constant on a Gaussian reference.
PlancherelCalibration calibrate_plancherel(const RootSystemSpec& rs, const GaussianInit& reference,
                                           const RadialGrid& space_grid, const RadialGrid& spectral_grid);

/// Cached calibrated constant for this root system (computed on first use).
double plancherel_constant(const RootSystemSpec& rs);

double plancherel_constant_analytic(const RootSystemSpec& rs);

/// Relative L2(phi^2 dH) distance between two fields of either representation.
double relative_l2_density(const RootSystemSpec& rs, const BiInvariantField& a, const BiInvariantField& b);

}  // namespace lsg
