#pragma once

#include "lsg/grid.hpp"
#include "lsg/root_system.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace lsg {

enum class Method { ClosedForm, Spectral };
enum class GridMode {
  Scaled,  // output nodes H = 2t * xi on the DFT-dual lattice
  Fixed,   // output on the input grid, direct oscillatory sum
};

std::string_view to_string(Method m);
std::string_view to_string(GridMode m);

struct PropagationResult {
  BiInvariantField field;  // Conjugated u * phi on groups, Plain u in Euclidean mode
  double time = 0.0;
  Method method = Method::ClosedForm;
  GridMode grid_mode = GridMode::Fixed;
};

/// Output lattice of the SCALED mode: spacing 2 t pi / L, half-width t pi N / L.
RadialGrid scaled_grid(const RadialGrid& input, double t);

/// Free evolution -i u_t = Delta u on R^n by the chirp / Fourier factorization.
PropagationResult euclidean_propagate(const RadialGrid& grid, std::span<const cplx> f, double t,
                                      GridMode mode = GridMode::Scaled);

/// Exact Gaussian solution (1 + 4iat)^(-n/2) exp(-(a + i c)|x|^2 / (1 + 4i(a + i c)t)).
cplx euclidean_gaussian_solution(const GaussianInit& init, int dim, double r2, double t);

/// Closed-form group propagator for the conjugated profile u * phi. Accepts a
/// Plain or Conjugated input field.
PropagationResult group_propagate_closed_form(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                                              GridMode mode = GridMode::Scaled);

/// Closed form with an explicit constant in place of the calibrated one.
PropagationResult group_propagate_closed_form_with(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                                                   GridMode mode, cplx constant);

/// Spectral-synthesis oracle. When `spectral_grid` is empty a grid resolving the
/// phase exp(-i t |lambda|^2) is chosen; `output_grid` defaults to the input grid.
PropagationResult group_propagate_spectral(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                                           std::optional<RadialGrid> spectral_grid = std::nullopt,
                                           std::optional<RadialGrid> output_grid = std::nullopt);

/// Spectral grid used by group_propagate_spectral when none is supplied.
RadialGrid auto_spectral_grid(const RootSystemSpec& rs, const BiInvariantField& f, double t,
                              const RadialGrid& output_grid);

/// Periodic Fourier-multiplier evolution exp(-i t (|k|^2 + |rho|^2)) on the input
/// box. Exact for band-limited data that stays inside the box.
PropagationResult group_propagate_multiplier(const RootSystemSpec& rs, const BiInvariantField& f, double t);

struct ConstantCalibration {
  cplx calibrated;
  cplx analytic;  // (4 pi i)^(-l/2), principal branch
  double residual = 0.0;
};

/// Least-squares constant matching the closed form to the spectral oracle for
/// the reference `f` at time t.
ConstantCalibration calibrate_constant(const RootSystemSpec& rs, const BiInvariantField& reference, double t);

/// Cached calibrated constant of this root system.
cplx propagator_constant(const RootSystemSpec& rs);

cplx fresnel_constant(int rank);

/// Time-dependent forcing psi(., s) sampled on the solution grid.
using Forcing = std::function<BiInvariantField(double)>;

/// -i u_t - Delta u = psi by Duhamel's formula with composite Simpson in s.
PropagationResult duhamel_solve(const RootSystemSpec& rs, const BiInvariantField& f, const Forcing& psi, double t,
                                int steps);

/// Plain u from a propagation result; wall nodes are NaN.
BiInvariantField plain_profile(const RootSystemSpec& rs, const PropagationResult& result);

/// L2(dH) norm of the conjugated profile.
double mass(const BiInvariantField& conjugated);

}  // namespace lsg
